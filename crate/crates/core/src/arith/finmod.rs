//! Finite abelian groups with integer endomorphisms, and their p-primary
//! parts as subquotients of (Z/p^a)^k.

use super::howell::{preimage, Howell, LocalRing, Vector};
use super::int::{prime_divisors, val_u64};

/// Integer matrix acting on column vectors.
pub type IMat = Vec<Vec<i64>>;

pub fn identity(k: usize) -> IMat {
    (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul_i(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut c = vec![vec![0i64; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                c[i][j] += x * b[t][j];
            }
        }
    }
    c
}

/// Reduce row i of `a` modulo `mods[i]`.
pub fn reduce_rows(a: &mut IMat, mods: &[u64]) {
    for (row, &d) in a.iter_mut().zip(mods) {
        for x in row.iter_mut() {
            *x = x.rem_euclid(d as i64);
        }
    }
}

/// A finite abelian group presented as a direct sum of cyclic groups Z/d_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAb {
    pub invariants: Vec<u64>,
}

impl FinAb {
    pub fn new(invariants: Vec<u64>) -> Self {
        assert!(invariants.iter().all(|&d| d >= 1));
        FinAb { invariants }
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .invariants
            .iter()
            .flat_map(|&d| prime_divisors(d))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Does `a` define an endomorphism (column convention)?
    pub fn is_endomorphism(&self, a: &IMat) -> bool {
        let k = self.rank();
        if a.len() != k || a.iter().any(|r| r.len() != k) {
            return false;
        }
        // image of d_j e_j must vanish
        (0..k).all(|j| {
            (0..k).all(|i| {
                ((self.invariants[j] as i128 * a[i][j] as i128)
                    .rem_euclid(self.invariants[i] as i128))
                    == 0
            })
        })
    }

    pub fn apply(&self, a: &IMat, x: &[i64]) -> Vec<i64> {
        (0..self.rank())
            .map(|i| {
                let s: i128 = a[i].iter().zip(x).map(|(&u, &v)| u as i128 * v as i128).sum();
                s.rem_euclid(self.invariants[i] as i128) as i64
            })
            .collect()
    }

    /// All elements, in lexicographic order of coordinates. Only for small groups.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.invariants {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for v in &out {
                for t in 0..d as i64 {
                    let mut w = v.clone();
                    w.push(t);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// The p-primary part as a subquotient over Z/p^a, with the coordinate
    /// indices it uses.
    pub fn p_part(&self, p: u64) -> Option<(SubQuo, Vec<usize>)> {
        let idx: Vec<usize> = (0..self.rank())
            .filter(|&i| self.invariants[i] % p == 0)
            .collect();
        if idx.is_empty() {
            return None;
        }
        let vals: Vec<u32> = idx.iter().map(|&i| val_u64(self.invariants[i], p)).collect();
        let a = *vals.iter().max().unwrap();
        let ring = LocalRing::new(p, a);
        let k = idx.len();
        let bottom = Howell::span(
            ring,
            k,
            vals.iter()
                .enumerate()
                .map(|(i, &v)| {
                    let mut e = vec![0; k];
                    e[i] = ring.pow_p(v);
                    e
                })
                .collect(),
        );
        Some((
            SubQuo {
                top: Howell::full(ring, k),
                bottom,
            },
            idx,
        ))
    }

    /// Restriction of an endomorphism to the coordinates `idx`, reduced into `ring`.
    pub fn restrict(a: &IMat, idx: &[usize], ring: &LocalRing) -> PMat {
        idx.iter()
            .map(|&i| idx.iter().map(|&j| ring.reduce_i64(a[i][j])).collect())
            .collect()
    }
}

/// Matrix over Z/p^a acting on column vectors.
pub type PMat = Vec<Vec<u64>>;

pub fn papply(ring: &LocalRing, a: &PMat, x: &[u64]) -> Vector {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0u64, |acc, (&u, &v)| ring.add(acc, ring.mul(u, v)))
        })
        .collect()
}

pub fn pmat_mul(ring: &LocalRing, a: &PMat, b: &PMat) -> PMat {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut c = vec![vec![0u64; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                c[i][j] = ring.add(c[i][j], ring.mul(x, b[t][j]));
            }
        }
    }
    c
}

pub fn pmat_identity(k: usize) -> PMat {
    (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect()
}

pub fn pmat_sub(ring: &LocalRing, a: &PMat, b: &PMat) -> PMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| ring.sub(x, y)).collect())
        .collect()
}

pub fn pmat_add(ring: &LocalRing, a: &PMat, b: &PMat) -> PMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| ring.add(x, y)).collect())
        .collect()
}

/// A subquotient top/bottom of (Z/p^a)^k, with bottom contained in top.
#[derive(Clone, Debug)]
pub struct SubQuo {
    pub top: Howell,
    pub bottom: Howell,
}

impl SubQuo {
    pub fn ring(&self) -> LocalRing {
        self.top.ring
    }

    pub fn dim(&self) -> usize {
        self.top.dim
    }

    /// log_p of the order.
    pub fn log_order(&self) -> u32 {
        self.top.log_order() - self.bottom.log_order()
    }

    pub fn is_trivial(&self) -> bool {
        self.log_order() == 0
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.top.contains(x)
    }

    pub fn is_zero_class(&self, x: &[u64]) -> bool {
        self.bottom.contains(x)
    }

    /// Elements of the top whose images under every `maps[k]` (into the
    /// ambient of `targets[k]`) lie in the corresponding bottom. The maps must
    /// be well defined on the subquotient.
    pub fn kernel(&self, maps: &[(&PMat, &Howell)]) -> SubQuo {
        let ring = self.ring();
        let gens = self.top.generators();
        let mut images: Vec<Vector> = vec![Vec::new(); gens.len()];
        let mut tgt_gens = Vec::new();
        let total: usize = maps.iter().map(|(_, b)| b.dim).sum();
        let mut off = 0;
        for (m, b) in maps {
            for (img, g) in images.iter_mut().zip(&gens) {
                img.extend(papply(&ring, m, g));
            }
            for r in b.rows() {
                let mut v = vec![0u64; total];
                v[off..off + b.dim].copy_from_slice(r);
                tgt_gens.push(v);
            }
            off += b.dim;
        }
        let target = Howell::span(ring, total, tgt_gens);
        let ker = preimage(ring, self.dim(), &gens, &images, &target);
        SubQuo {
            top: ker.join(&self.bottom),
            bottom: self.bottom.clone(),
        }
    }

    /// Image of the top under `m`, as a subquotient over `target_bottom`.
    pub fn image(&self, m: &PMat, target_bottom: &Howell) -> SubQuo {
        let ring = self.ring();
        let mut gens: Vec<Vector> = self.top.rows().map(|g| papply(&ring, m, g)).collect();
        gens.extend(target_bottom.generators());
        SubQuo {
            top: Howell::span(ring, target_bottom.dim, gens),
            bottom: target_bottom.clone(),
        }
    }

    /// Quotient of this subquotient by the submodule generated by `extra`.
    pub fn quotient_by(&self, extra: &Howell) -> SubQuo {
        SubQuo {
            top: self.top.clone(),
            bottom: self.bottom.join(extra),
        }
    }
}
