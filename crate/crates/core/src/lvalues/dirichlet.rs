use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::int::{divisors, factorize, gcd_u64, inv_mod, kronecker, lcm_u64, pow_mod, primitive_root};
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};

/// Generators of (Z/f)^* with their orders: one per odd prime power, and
/// -1 and 5 for the 2-part.
pub fn unit_generators(f: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let lift = |a: u64, q: u64| -> u64 {
        // x = a mod q, x = 1 mod f/q
        let r = f / q;
        if r == 1 {
            return a % f;
        }
        let t = ((a + q - 1) % q) as u128 * u128::from(inv_mod(r % q, q).expect("coprime")) % q as u128;
        ((1 + r as u128 * t) % f as u128) as u64
    };
    for (p, k) in factorize(f) {
        let q = p.pow(k);
        if p == 2 {
            if k >= 2 {
                out.push((lift(q - 1, q), 2));
            }
            if k >= 3 {
                out.push((lift(5, q), q / 4));
            }
        } else {
            let mut g = primitive_root(p);
            if k >= 2 && pow_mod(g, p - 1, p * p) == 1 {
                g += p;
            }
            out.push((lift(g, q), q / p * (p - 1)));
        }
    }
    out
}

/// A Dirichlet character mod f, given by exponents on `unit_generators(f)`:
/// chi(g_i) = zeta_{ord_i}^{e_i}.
#[derive(Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    order: u64,
    /// chi(a) = zeta_order^k, None when gcd(a, f) > 1.
    table: Vec<Option<u64>>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletCharacter(mod {}, {:?})", self.modulus, self.exponents)
    }
}

impl DirichletCharacter {
    pub fn new(modulus: u64, exponents: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        let gens = unit_generators(modulus);
        if exponents.len() != gens.len() {
            return Err(Error::Invalid(format!(
                "(Z/{modulus})^* has {} generators, got {} exponents",
                gens.len(),
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents.iter().zip(&gens).map(|(&e, &(_, o))| e % o).collect();
        let order = exponents
            .iter()
            .zip(&gens)
            .fold(1, |acc, (&e, &(_, o))| lcm_u64(acc, o / gcd_u64(o, e)));
        let mut table = vec![None; modulus as usize];
        // walk all exponent tuples in mixed radix
        let mut idx = vec![0u64; gens.len()];
        loop {
            let mut a = 1 % modulus;
            let mut k = 0u64;
            for ((&i, &(g, o)), &e) in idx.iter().zip(&gens).zip(&exponents) {
                a = ((a as u128 * pow_mod(g, i, modulus) as u128) % modulus as u128) as u64;
                // zeta_o^{ie} as a power of zeta_order
                let h = gcd_u64(o, e);
                k = (k + (i * e % o) / h * (order / (o / h))) % order;
            }
            table[a as usize] = Some(k);
            let mut pos = 0;
            while pos < idx.len() {
                idx[pos] += 1;
                if idx[pos] < gens[pos].1 {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
        Ok(DirichletCharacter {
            modulus,
            exponents,
            order,
            table,
        })
    }

    /// A character from its values on 0..f (zero off the units).
    pub fn from_values(modulus: u64, values: &[CyclotomicElement]) -> Result<Self> {
        if values.len() as u64 != modulus {
            return Err(Error::Invalid(format!("expected {modulus} values")));
        }
        let mut exps = Vec::new();
        for (g, o) in unit_generators(modulus) {
            let v = &values[g as usize];
            let e = (0..o)
                .find(|&e| CyclotomicElement::zeta_pow(o, e as i64) == *v)
                .ok_or_else(|| Error::Invalid(format!("value at {g} is not a root of unity of order dividing {o}")))?;
            exps.push(e);
        }
        let chi = Self::new(modulus, &exps)?;
        for (a, v) in values.iter().enumerate() {
            if chi.value(a as u64) != *v {
                return Err(Error::Invalid(format!("values are not multiplicative (at {a})")));
            }
        }
        Ok(chi)
    }

    pub fn trivial(modulus: u64) -> Self {
        let n = unit_generators(modulus).len();
        Self::new(modulus, &vec![0; n]).expect("trivial character")
    }

    /// The Kronecker symbol (d/.) for a fundamental discriminant d, mod |d|.
    pub fn quadratic(d: i64) -> Result<Self> {
        let f = d.unsigned_abs();
        let vals: Vec<CyclotomicElement> = (0..f)
            .map(|a| CyclotomicElement::from_int(1, if gcd_u64(a, f) == 1 { kronecker(d, a) } else { 0 }))
            .collect();
        Self::from_values(f, &vals)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Order of the character; its values lie in Q(zeta_order).
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn value(&self, a: u64) -> CyclotomicElement {
        match self.table[(a % self.modulus) as usize] {
            Some(k) => CyclotomicElement::zeta_pow(self.order, k as i64),
            None => CyclotomicElement::zero(self.order),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_odd(&self) -> bool {
        self.modulus > 2 && self.table[(self.modulus - 1) as usize] != Some(0)
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// chi^a.
    pub fn galois(&self, a: i64) -> Self {
        let gens = unit_generators(self.modulus);
        let exps: Vec<u64> = self
            .exponents
            .iter()
            .zip(&gens)
            .map(|(&e, &(_, o))| ((e as i128 * a as i128).rem_euclid(o as i128)) as u64)
            .collect();
        Self::new(self.modulus, &exps).expect("same modulus")
    }

    /// The conductor: least d | f such that chi is trivial on units = 1 mod d.
    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        divisors(f)
            .into_iter()
            .find(|&d| {
                (0..f)
                    .filter(|&a| a % d == 1 % d)
                    .all(|a| self.table[a as usize].map_or(true, |k| k == 0))
            })
            .unwrap_or(f)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let c = self.conductor();
        if c == self.modulus {
            return self.clone();
        }
        let vals: Vec<CyclotomicElement> = (0..c)
            .map(|a| {
                if gcd_u64(a, c) != 1 {
                    return CyclotomicElement::zero(1);
                }
                let lift = (a..).step_by(c as usize).find(|&b| gcd_u64(b, self.modulus) == 1).expect("lift");
                self.value(lift)
            })
            .collect();
        Self::from_values(c, &vals).expect("primitive character")
    }

    /// B_{1,chi} = (1/f) sum_{a=1}^{f} chi(a) a for this modulus.
    pub fn bernoulli_1(&self) -> CyclotomicElement {
        let f = self.modulus;
        let mut acc = CyclotomicElement::zero(self.order);
        for a in 1..=f {
            if let Some(k) = self.table[(a % f) as usize] {
                acc = acc + CyclotomicElement::zeta_pow(self.order, k as i64).scale_int(&BigInt::from(a));
            }
        }
        acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(f)))
    }

    /// L(0, chi) for this (possibly imprimitive) modulus:
    /// -B_{1,chi*} times (1 - chi*(p)) for primes p | f not dividing the conductor.
    pub fn l_at_0(&self) -> Result<CyclotomicElement> {
        if self.is_trivial() {
            return Err(Error::Invalid("L(0, chi) is not provided for the trivial character".into()));
        }
        let prim = self.primitive();
        if !prim.is_odd() {
            return Ok(CyclotomicElement::zero(1));
        }
        let mut v = -prim.bernoulli_1();
        for (p, _) in factorize(self.modulus) {
            if prim.modulus % p != 0 {
                v = v * (CyclotomicElement::one(1) - prim.value(p));
            }
        }
        Ok(v.simplify())
    }
}
