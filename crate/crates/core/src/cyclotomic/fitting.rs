//! Fitting ideals of finite Z[zeta_n]-modules.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::{tables, CyclotomicElement};
use super::ideal::{primes_above, CycloIdeal, PrimeIdeal};
use crate::arith::finmod::{pmat_add, pmat_identity, pmat_mul, FinAb, IMat, PMat, SubQuo};
use crate::arith::howell::LocalRing;
use crate::arith::zmat::{mat_mul, smith, ZRow};
use crate::error::{Error, Result};

/// A module O^r / (column span of `entries`), with `entries` an r x c matrix
/// over O = Z[zeta_n].
#[derive(Clone, Debug)]
pub struct OModulePresentation {
    pub n: u64,
    pub entries: Vec<Vec<CyclotomicElement>>,
}

impl OModulePresentation {
    pub fn new(n: u64, entries: Vec<Vec<CyclotomicElement>>) -> Result<Self> {
        let c = entries.first().map_or(0, |r| r.len());
        if entries.iter().any(|r| r.len() != c) {
            return Err(Error::Invalid("ragged relation matrix".into()));
        }
        if entries.iter().flatten().any(|x| !x.embed(n).is_integral()) {
            return Err(Error::Invalid("relation entries must be integral".into()));
        }
        let entries = entries
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.embed(n)).collect())
            .collect();
        Ok(OModulePresentation { n, entries })
    }

    pub fn generators(&self) -> usize {
        self.entries.len()
    }

    pub fn relations(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    /// The Fitting ideal: generated by all maximal minors.
    pub fn fitting_ideal(&self) -> Result<CycloIdeal> {
        let r = self.generators();
        let c = self.relations();
        if r == 0 {
            return Ok(CycloIdeal::unit(self.n));
        }
        if c < r {
            return Err(Error::InfiniteCokernel);
        }
        assert!(c < 64, "too many relations for minor enumeration");
        let mut memo: HashMap<u64, CyclotomicElement> = HashMap::new();
        let mut minors = Vec::new();
        for set in subsets(c, r) {
            let m = self.minor(set, &mut memo);
            if !m.is_zero() {
                minors.push(m);
            }
        }
        if minors.is_empty() {
            return Err(Error::InfiniteCokernel);
        }
        Ok(CycloIdeal::from_generators(self.n, &minors))
    }

    /// Determinant of the last |cols| rows restricted to the column set,
    /// by Laplace expansion along the first of those rows.
    fn minor(&self, cols: u64, memo: &mut HashMap<u64, CyclotomicElement>) -> CyclotomicElement {
        let k = cols.count_ones() as usize;
        if k == 0 {
            return CyclotomicElement::one(self.n);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let row = self.generators() - k;
        let mut acc = CyclotomicElement::zero(self.n);
        let mut pos = 0;
        for j in 0..64 {
            if cols >> j & 1 == 0 {
                continue;
            }
            let a = &self.entries[row][j];
            if !a.is_zero() {
                let sub = self.minor(cols & !(1 << j), memo);
                if !sub.is_zero() {
                    let t = a * &sub;
                    acc = if pos % 2 == 0 { acc + t } else { acc - t };
                }
            }
            pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// The same module as a finite abelian group with the action of zeta.
    pub fn to_zeta_module(&self) -> Result<ZetaModule> {
        let n = self.n;
        let t = tables(n);
        let d = t.degree;
        let r = self.generators();
        let total = r * d;
        let mut rels: Vec<ZRow> = Vec::new();
        for j in 0..self.relations() {
            for s in 0..d {
                let z = CyclotomicElement::zeta_pow(n, s as i64);
                let mut v = vec![BigInt::zero(); total];
                for i in 0..r {
                    let y = &self.entries[i][j] * &z;
                    for (k, c) in y.numerators().iter().enumerate() {
                        v[i * d + k] = c.clone();
                    }
                }
                rels.push(v);
            }
        }
        // multiplication by zeta on row vectors, block diagonal
        let mut zr: Vec<ZRow> = vec![vec![BigInt::zero(); total]; total];
        for i in 0..r {
            for k in 0..d {
                for (l, &c) in t.powers[(k + 1) % t.powers.len()].iter().enumerate() {
                    zr[i * d + k][i * d + l] = BigInt::from(c);
                }
            }
        }
        let snf = smith(&rels, total);
        if snf.diagonal.len() < total {
            return Err(Error::InfiniteCokernel);
        }
        let w = mat_mul(&mat_mul(&snf.v_inv, &zr, total), &snf.v, total);
        let keep: Vec<usize> = (0..total).filter(|&i| !snf.diagonal[i].is_one()).collect();
        let invariants: Vec<u64> = keep
            .iter()
            .map(|&i| {
                snf.diagonal[i]
                    .to_u64()
                    .ok_or_else(|| Error::Unsupported("invariant factor exceeds 64 bits".into()))
            })
            .collect::<Result<_>>()?;
        // column convention: image coordinate j = sum_i W_ij y_i
        let zeta = keep
            .iter()
            .enumerate()
            .map(|(a, &j)| {
                let dj = BigInt::from(invariants[a]);
                keep.iter()
                    .map(|&i| {
                        let x = &w[i][j] % &dj;
                        let x = if x.is_negative() { x + &dj } else { x };
                        x.to_i64().expect("reduced entry fits")
                    })
                    .collect()
            })
            .collect();
        Ok(ZetaModule {
            n,
            group: FinAb::new(invariants),
            zeta,
        })
    }
}

fn subsets(c: usize, r: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(start: usize, c: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for j in start..=c - left {
            rec(j + 1, c, left - 1, cur | 1 << j, out);
        }
    }
    rec(0, c, r, 0, &mut out);
    out
}

/// A finite abelian group with an endomorphism `zeta` satisfying Phi_n(zeta) = 0,
/// i.e. a finite Z[zeta_n]-module.
#[derive(Clone, Debug)]
pub struct ZetaModule {
    pub n: u64,
    pub group: FinAb,
    pub zeta: IMat,
}

impl ZetaModule {
    pub fn order(&self) -> u128 {
        self.group.order()
    }

    /// Fitting ideal from the lengths of the primary components.
    pub fn fitting_ideal(&self) -> Result<CycloIdeal> {
        let mut acc = CycloIdeal::unit(self.n);
        for p in self.group.primes() {
            let (sq, idx) = self.group.p_part(p).expect("p divides the order");
            let z = FinAb::restrict(&self.zeta, &idx, &sq.ring());
            for (pr, len) in prime_lengths(self.n, &sq, &z)? {
                acc = acc.mul(&pr.ideal.pow(len as i64)?);
            }
        }
        Ok(acc)
    }
}

/// Matrix of a polynomial in zeta acting on a p-local module.
pub fn element_matrix(ring: &LocalRing, x: &CyclotomicElement, zeta: &PMat) -> PMat {
    assert!(x.is_integral());
    let k = zeta.len();
    let mut acc = vec![vec![0u64; k]; k];
    let mut pw = pmat_identity(k);
    for (i, c) in x.numerators().iter().enumerate() {
        if i > 0 {
            pw = pmat_mul(ring, &pw, zeta);
        }
        if c.is_zero() {
            continue;
        }
        let q = BigInt::from(ring.q);
        let c = ((c % &q) + &q) % &q;
        let c = c.to_u64().unwrap();
        let scaled: PMat = pw
            .iter()
            .map(|r| r.iter().map(|&v| ring.mul(v, c)).collect())
            .collect();
        acc = pmat_add(ring, &acc, &scaled);
    }
    acc
}

/// For a finite O-module given as a p-local subquotient with the matrix of
/// zeta, return (P, length of the P-primary part) for each prime P above p.
pub fn prime_lengths(
    n: u64,
    sq: &SubQuo,
    zeta: &PMat,
) -> Result<Vec<(PrimeIdeal, u64)>> {
    let ring = sq.ring();
    let p = ring.p;
    let mut out = Vec::new();
    if sq.is_trivial() {
        return Ok(out);
    }
    for pr in primes_above(n, p) {
        let big = pr.ideal.pow((pr.e * ring.a as u64) as i64)?;
        let mats: Vec<PMat> = big
            .o_generators()
            .iter()
            .map(|g| element_matrix(&ring, g, zeta))
            .collect();
        let maps: Vec<(&PMat, &crate::arith::howell::Howell)> =
            mats.iter().map(|m| (m, &sq.bottom)).collect();
        let ker = sq.kernel(&maps);
        let lg = ker.log_order() as u64;
        if lg % pr.f != 0 {
            return Err(Error::Invalid(
                "primary component has order that is not a power of N(P)".into(),
            ));
        }
        if lg > 0 {
            out.push((pr.clone(), lg / pr.f));
        }
    }
    let total: u64 = out.iter().map(|(pr, l)| pr.f * l).sum();
    debug_assert_eq!(total, sq.log_order() as u64, "primary decomposition lost order");
    Ok(out)
}
