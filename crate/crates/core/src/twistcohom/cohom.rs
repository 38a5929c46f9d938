//! p-local cohomology of finite G-modules in degrees -1..2.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::arith::finmod::{papply, pmat_add, pmat_identity, pmat_mul, pmat_sub, FinAb, IMat, PMat, SubQuo};
use crate::arith::howell::{Howell, LocalRing, Vector};
use crate::arith::int::{inv_mod, val_u64};
use crate::cyclotomic::{prime_lengths, CycloIdeal, PrimeIdeal};
use crate::error::Result;
use crate::groups::FiniteGroup;

use super::GModule;

/// A finite O-module, O = Z[zeta_n], kept as its p-primary parts: each a
/// subquotient of (Z/p^a)^k together with the matrix of zeta.
#[derive(Clone, Debug)]
pub struct FiniteOModule {
    conductor: u64,
    parts: Vec<(SubQuo, PMat)>,
}

impl FiniteOModule {
    pub(crate) fn new(conductor: u64, parts: Vec<(SubQuo, PMat)>) -> Self {
        FiniteOModule {
            conductor,
            parts: parts.into_iter().filter(|(sq, _)| !sq.is_trivial()).collect(),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn primary_parts(&self) -> &[(SubQuo, PMat)] {
        &self.parts
    }

    pub fn order(&self) -> u128 {
        self.parts
            .iter()
            .map(|(sq, _)| (sq.ring().p as u128).pow(sq.log_order()))
            .product()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    /// Cyclic prime-power orders of the underlying abelian group, ascending.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (sq, _) in &self.parts {
            let ring = sq.ring();
            let k = sq.dim();
            // r_e = number of cyclic factors of order >= p^e
            let mut logs = vec![0u32];
            for e in 1..=ring.a {
                let m: PMat = (0..k)
                    .map(|i| (0..k).map(|j| if i == j { ring.pow_p(e) } else { 0 }).collect())
                    .collect();
                logs.push(sq.kernel(&[(&m, &sq.bottom)]).log_order());
            }
            let r: Vec<u32> = (1..logs.len()).map(|e| logs[e] - logs[e - 1]).collect();
            for e in 0..r.len() {
                let exact = r[e] - r.get(e + 1).copied().unwrap_or(0);
                for _ in 0..exact {
                    out.push(ring.p.pow(e as u32 + 1));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Invariant factors d_1 | d_2 | ... of the underlying abelian group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: HashMap<u64, Vec<u64>> = HashMap::new();
        for q in self.elementary_divisors() {
            let p = (2..=q).find(|p| q % p == 0).expect("q > 1");
            by_prime.entry(p).or_default().push(q);
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for qs in by_prime.values_mut() {
            qs.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in qs.iter().enumerate() {
                out[len - 1 - i] *= q;
            }
        }
        out
    }

    pub fn prime_lengths(&self) -> Result<Vec<(PrimeIdeal, u64)>> {
        let mut out = Vec::new();
        for (sq, z) in &self.parts {
            out.extend(prime_lengths(self.conductor, sq, z)?);
        }
        Ok(out)
    }

    /// Fit_O = prod_P P^{length of the P-part}.
    pub fn fitting_ideal(&self) -> Result<CycloIdeal> {
        let mut acc = CycloIdeal::unit(self.conductor);
        for (pr, len) in self.prime_lengths()? {
            acc = acc.mul(&pr.ideal.pow(len as i64)?);
        }
        Ok(acc)
    }
}

/// Generators of a subgroup with its elements.
pub(crate) struct Acting<'a> {
    pub group: &'a FiniteGroup,
    pub gens: Vec<usize>,
    pub elems: Vec<usize>,
}

impl<'a> Acting<'a> {
    pub fn new(group: &'a FiniteGroup, gens: Vec<usize>) -> Self {
        let elems = group.closure(&gens);
        Acting { group, gens, elems }
    }
}

/// The p-primary part of a G-module with the matrices of every element and of zeta.
pub(crate) struct Local {
    pub ring: LocalRing,
    pub idx: Vec<usize>,
    pub invariants: Vec<u64>,
    pub whole: SubQuo,
    pub acts: Vec<PMat>,
    pub zeta: PMat,
}

pub(crate) fn locals(module: &GModule, zeta: &IMat) -> Vec<Local> {
    let ab = module.abelian();
    ab.primes()
        .into_iter()
        .map(|p| {
            let (whole, idx) = ab.p_part(p).expect("p divides the order");
            let ring = whole.ring();
            Local {
                ring,
                invariants: idx.iter().map(|&i| ab.invariants[i]).collect(),
                acts: (0..module.group().order())
                    .map(|g| FinAb::restrict(module.action(g), &idx, &ring))
                    .collect(),
                zeta: FinAb::restrict(zeta, &idx, &ring),
                idx,
                whole,
            }
        })
        .collect()
}

fn unit(k: usize, j: usize) -> Vector {
    let mut v = vec![0; k];
    v[j] = 1;
    v
}

fn columns(ring: &LocalRing, m: &PMat, k: usize) -> Vec<Vector> {
    (0..k).map(|j| papply(ring, m, &unit(k, j))).collect()
}

fn block_diag(m: &PMat, copies: usize) -> PMat {
    let k = m.len();
    let mut out = vec![vec![0u64; k * copies]; k * copies];
    for b in 0..copies {
        for i in 0..k {
            out[b * k + i][b * k..(b + 1) * k].copy_from_slice(&m[i]);
        }
    }
    out
}

fn block_howell(h: &Howell, copies: usize) -> Howell {
    let k = h.dim;
    let mut gens = Vec::new();
    for b in 0..copies {
        for r in h.rows() {
            let mut v = vec![0u64; k * copies];
            v[b * k..(b + 1) * k].copy_from_slice(r);
            gens.push(v);
        }
    }
    Howell::span(h.ring, k * copies, gens)
}

fn empty(ring: LocalRing) -> (SubQuo, PMat) {
    (
        SubQuo {
            top: Howell::zero(ring, 0),
            bottom: Howell::zero(ring, 0),
        },
        Vec::new(),
    )
}

/// Crossed homomorphisms modulo principal ones, for a module given by its
/// bottom and the matrices of the generators. Cocycles are parametrised by
/// their values on the generators, extended along a spanning tree; every
/// non-tree edge gives one relation.
fn h1_generic(ring: LocalRing, bottom: &Howell, act: &Acting, gen_acts: &[PMat], zeta: &PMat) -> (SubQuo, PMat) {
    let k = bottom.dim;
    let ng = act.gens.len();
    if k == 0 || ng == 0 {
        return empty(ring);
    }
    let n = ng * k;
    let proj = |i: usize| -> PMat {
        let mut e = vec![vec![0u64; n]; k];
        for (r, row) in e.iter_mut().enumerate() {
            row[i * k + r] = 1;
        }
        e
    };
    let projs: Vec<PMat> = (0..ng).map(proj).collect();
    let g = act.group;
    let mut lin: HashMap<usize, PMat> = HashMap::from([(0, vec![vec![0u64; n]; k])]);
    let mut tree: HashSet<(usize, usize)> = HashSet::new();
    let mut queue = VecDeque::from([0usize]);
    let step = |i: usize, lh: &PMat| -> PMat {
        let a = pmat_mul(&ring, &gen_acts[i], lh);
        pmat_add(&ring, &projs[i], &a)
    };
    while let Some(h) = queue.pop_front() {
        for (i, &s) in act.gens.iter().enumerate() {
            let x = g.mul(s, h);
            if !lin.contains_key(&x) {
                let lx = step(i, &lin[&h]);
                lin.insert(x, lx);
                tree.insert((i, h));
                queue.push_back(x);
            }
        }
    }
    let mut constraints: Vec<PMat> = Vec::new();
    for &h in &act.elems {
        for (i, &s) in act.gens.iter().enumerate() {
            if tree.contains(&(i, h)) {
                continue;
            }
            let c = pmat_sub(&ring, &lin[&g.mul(s, h)], &step(i, &lin[&h]));
            if c.iter().flatten().any(|&x| x != 0) {
                constraints.push(c);
            }
        }
    }
    let space = SubQuo {
        top: Howell::full(ring, n),
        bottom: block_howell(bottom, ng),
    };
    let maps: Vec<(&PMat, &Howell)> = constraints.iter().map(|c| (c, bottom)).collect();
    let z1 = if maps.is_empty() { space } else { space.kernel(&maps) };
    let id = pmat_identity(k);
    let cob: Vec<Vector> = (0..k)
        .map(|j| {
            gen_acts
                .iter()
                .flat_map(|a| papply(&ring, &pmat_sub(&ring, a, &id), &unit(k, j)))
                .collect()
        })
        .collect();
    let h1 = z1.quotient_by(&Howell::span(ring, n, cob));
    (h1, block_diag(zeta, ng))
}

impl Local {
    fn k(&self) -> usize {
        self.idx.len()
    }

    pub fn bottom(&self) -> &Howell {
        &self.whole.bottom
    }

    fn gen_acts(&self, act: &Acting) -> Vec<PMat> {
        act.gens.iter().map(|&s| self.acts[s].clone()).collect()
    }

    pub fn h0(&self, act: &Acting) -> SubQuo {
        let id = pmat_identity(self.k());
        let ms: Vec<PMat> = act.gens.iter().map(|&s| pmat_sub(&self.ring, &self.acts[s], &id)).collect();
        if ms.is_empty() {
            return self.whole.clone();
        }
        let maps: Vec<(&PMat, &Howell)> = ms.iter().map(|m| (m, self.bottom())).collect();
        self.whole.kernel(&maps)
    }

    pub fn norm(&self, act: &Acting) -> PMat {
        let k = self.k();
        let mut acc = vec![vec![0u64; k]; k];
        for &g in &act.elems {
            acc = pmat_add(&self.ring, &acc, &self.acts[g]);
        }
        acc
    }

    /// I_G M plus the bottom.
    pub fn augmentation_image(&self, act: &Acting) -> Howell {
        let id = pmat_identity(self.k());
        let mut gens = self.bottom().generators();
        for &s in &act.gens {
            gens.extend(columns(&self.ring, &pmat_sub(&self.ring, &self.acts[s], &id), self.k()));
        }
        Howell::span(self.ring, self.k(), gens)
    }

    pub fn coinvariants(&self, act: &Acting) -> SubQuo {
        self.whole.quotient_by(&self.augmentation_image(act))
    }

    /// Norm_G M plus the bottom.
    pub fn norm_image(&self, act: &Acting) -> Howell {
        let mut gens = columns(&self.ring, &self.norm(act), self.k());
        gens.extend(self.bottom().generators());
        Howell::span(self.ring, self.k(), gens)
    }

    pub fn tate0(&self, act: &Acting) -> SubQuo {
        self.h0(act).quotient_by(&self.norm_image(act))
    }

    pub fn tate_minus1(&self, act: &Acting) -> SubQuo {
        let n = self.norm(act);
        self.whole
            .kernel(&[(&n, self.bottom())])
            .quotient_by(&self.augmentation_image(act))
    }

    pub fn h1(&self, act: &Acting) -> (SubQuo, PMat) {
        h1_generic(self.ring, self.bottom(), act, &self.gen_acts(act), &self.zeta)
    }

    /// H^2(M) = H^1(J (x) M) with J = Z[G] / Z.Norm, using the sequence
    /// 0 -> M -> Z[G] (x) M -> J (x) M -> 0 and the induced middle term.
    pub fn h2(&self, act: &Acting) -> (SubQuo, PMat) {
        let g = act.group;
        let k = self.k();
        let others: Vec<usize> = act.elems.iter().copied().filter(|&x| x != 0).collect();
        let pos: HashMap<usize, usize> = others.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k2 = others.len() * k;
        let mats: Vec<PMat> = act
            .gens
            .iter()
            .map(|&s| {
                let a = &self.acts[s];
                let mut m = vec![vec![0u64; k2]; k2];
                let mut add = |rb: usize, cb: usize, neg: bool| {
                    for i in 0..k {
                        for j in 0..k {
                            let v = if neg { self.ring.neg(a[i][j]) } else { a[i][j] };
                            let cell = &mut m[rb * k + i][cb * k + j];
                            *cell = self.ring.add(*cell, v);
                        }
                    }
                };
                for &x in &others {
                    let sx = g.mul(s, x);
                    if sx != 0 {
                        add(pos[&sx], pos[&x], false);
                    } else {
                        // e_1 = -sum of the other basis vectors
                        for b in 0..others.len() {
                            add(b, pos[&x], true);
                        }
                    }
                }
                m
            })
            .collect();
        let bottom = block_howell(self.bottom(), others.len());
        let zeta = block_diag(&self.zeta, others.len());
        h1_generic(self.ring, &bottom, act, &mats, &zeta)
    }

    /// An integer coordinate vector of the full module reducing to `v` here
    /// and to 0 at the other primes.
    pub fn lift(&self, v: &[u64], rank: usize) -> Vec<i64> {
        let mut out = vec![0i64; rank];
        for (t, (&i, &d)) in self.idx.iter().zip(&self.invariants).enumerate() {
            let q = self.ring.p.pow(val_u64(d, self.ring.p));
            let c = d / q;
            let x = (v[t] % q) as u128 * (c as u128) % d as u128 * inv_mod(c % q, q).unwrap_or(0) as u128 % d as u128;
            out[i] = x as i64;
        }
        out
    }
}

/// A Sylow p-subgroup.
pub(crate) fn sylow(group: &FiniteGroup, p: u64) -> Vec<usize> {
    let n = group.order() as u64;
    let pp = p.pow(val_u64(n, p)) as usize;
    group
        .subgroups()
        .iter()
        .find(|h| h.len() == pp)
        .cloned()
        .expect("Sylow subgroups exist")
}
