//! Univariate polynomials over a prime field F_p, with the factorisation of
//! cyclotomic polynomials needed to find the primes of Z[zeta_n] above p.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::int::{inv_mod, mul_mod, mult_order};

/// Little-endian coefficient vector, always trimmed (no trailing zeros).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyFp {
    pub coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFp { coeffs }
    }

    pub fn zero() -> Self {
        PolyFp { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyFp { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        PolyFp { coeffs: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, o: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                (self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0))
                    % p
            })
            .collect();
        PolyFp::new(c, p)
    }

    pub fn sub(&self, o: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                (self.coeffs.get(i).copied().unwrap_or(0) + p
                    - o.coeffs.get(i).copied().unwrap_or(0))
                    % p
            })
            .collect();
        PolyFp::new(c, p)
    }

    pub fn mul(&self, o: &Self, p: u64) -> Self {
        if self.is_zero() || o.is_zero() {
            return PolyFp::zero();
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        PolyFp::new(c, p)
    }

    pub fn divrem(&self, d: &Self, p: u64) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if r.len() <= dd {
            return (PolyFp::zero(), self.clone());
        }
        let inv = inv_mod(d.lead(), p).expect("leading coefficient invertible");
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv, p);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + p - mul_mod(c, dc, p)) % p;
            }
        }
        (PolyFp::new(q, p), PolyFp::new(r, p))
    }

    pub fn rem(&self, d: &Self, p: u64) -> Self {
        self.divrem(d, p).1
    }

    pub fn monic(&self, p: u64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), p).expect("nonzero lead");
        PolyFp::new(self.coeffs.iter().map(|&c| mul_mod(c, inv, p)).collect(), p)
    }

    pub fn gcd(&self, o: &Self, p: u64) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn powmod(&self, mut e: u128, m: &Self, p: u64) -> Self {
        let mut base = self.rem(m, p);
        let mut acc = PolyFp::one().rem(m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p).rem(m, p);
            }
            base = base.mul(&base, p).rem(m, p);
            e >>= 1;
        }
        acc
    }
}

/// The n-th cyclotomic polynomial over Z (little-endian integer coefficients).
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<i64> = vec![1];
    for d in super::int::divisors(n) {
        let mu = super::int::moebius(n / d);
        if mu == 0 {
            continue;
        }
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        if mu == 1 {
            num = poly_mul_z(&num, &f);
        } else {
            den = poly_mul_z(&den, &f);
        }
    }
    poly_div_exact_z(&num, &den)
}

fn poly_mul_z(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn poly_div_exact_z(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db];
    let mut q = vec![0i64; a.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] / lb;
        q[i - db] = c;
        for (j, &bc) in b.iter().enumerate() {
            r[i - db + j] -= c * bc;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "inexact polynomial division");
    q
}

/// Split a squarefree product of distinct monic irreducibles of equal degree `f`.
fn equal_degree_split(g: &PolyFp, f: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<PolyFp> {
    let deg = g.degree().unwrap_or(0);
    if deg == f {
        return vec![g.clone()];
    }
    loop {
        let a = PolyFp::new((0..deg).map(|_| rng.gen_range(0..p)).collect(), p);
        if a.degree().unwrap_or(0) < 1 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(f-1)) mod g
            let mut t = a.rem(g, p);
            let mut acc = t.clone();
            for _ in 1..f {
                t = t.mul(&t, p).rem(g, p);
                acc = acc.add(&t, p);
            }
            acc
        } else {
            // a^((p^f - 1)/2) = (prod_{i<f} a^(p^i))^((p - 1)/2)
            let mut frob = a.rem(g, p);
            let mut norm = frob.clone();
            for _ in 1..f {
                frob = frob.powmod(p as u128, g, p);
                norm = norm.mul(&frob, p).rem(g, p);
            }
            norm.powmod(((p - 1) / 2) as u128, g, p).sub(&PolyFp::one(), p)
        };
        let d = g.gcd(&b, p);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < deg {
            let (q, _) = g.divrem(&d, p);
            let mut out = equal_degree_split(&d, f, p, rng);
            out.extend(equal_degree_split(&q.monic(p), f, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of Phi_m modulo a prime p with p not dividing m,
/// sorted canonically. All have degree ord_m(p).
pub fn factor_cyclotomic_mod_p(m: u64, p: u64) -> Vec<PolyFp> {
    assert!(m % p != 0, "p must not divide m");
    let phi = cyclotomic_poly(m);
    let g = PolyFp::new(phi.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect(), p);
    let f = mult_order(p % m.max(1), m.max(1)) as usize;
    let f = if m <= 2 { 1 } else { f };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ (m << 20) ^ p);
    let mut out = equal_degree_split(&g, f, p, &mut rng);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len(), 49);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn factorisations_multiply_back() {
        for (m, p) in [(11u64, 23u64), (11, 2), (8, 3), (12, 5), (7, 2), (5, 11), (15, 2), (1, 3)] {
            let fs = factor_cyclotomic_mod_p(m, p);
            let f = if m <= 2 { 1 } else { mult_order(p % m, m) as usize };
            assert!(fs.iter().all(|g| g.degree() == Some(f)));
            let prod = fs.iter().fold(PolyFp::one(), |acc, g| acc.mul(g, p));
            let phi = cyclotomic_poly(m);
            let want = PolyFp::new(phi.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect(), p);
            assert_eq!(prod, want, "m={m} p={p}");
        }
    }
}
