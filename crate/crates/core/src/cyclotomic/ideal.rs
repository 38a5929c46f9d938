use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::element::{tables, CyclotomicElement};
use crate::arith::int::{euler_phi, factorize, lcm_u64, mult_order, val_bigint, val_u64};
use crate::arith::polyfp::factor_cyclotomic_mod_p;
use crate::arith::zmat::{det, hnf, inverse_rational, HnfBuilder, ZRow};
use crate::error::{Error, Result};

/// A fractional ideal of Z[zeta_n]: the Z-lattice spanned by `rows / den`,
/// with `rows` in canonical Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloIdeal {
    n: u64,
    rows: Vec<ZRow>,
    den: BigInt,
}

fn row_of(x: &CyclotomicElement, scale: &BigInt) -> ZRow {
    // x * scale must be integral
    let f = scale / x.denominator();
    debug_assert!((scale % x.denominator()).is_zero());
    x.numerators().iter().map(|c| c * &f).collect()
}

impl CycloIdeal {
    fn canonical(n: u64, rows: Vec<ZRow>, den: BigInt) -> Self {
        if rows.is_empty() {
            return CycloIdeal {
                n,
                rows,
                den: BigInt::one(),
            };
        }
        let mut g = den.clone();
        for r in &rows {
            for x in r {
                if g.is_one() {
                    break;
                }
                g = g.gcd(x);
            }
        }
        if g.is_one() {
            return CycloIdeal { n, rows, den };
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &g).collect())
            .collect();
        CycloIdeal { n, rows, den: den / g }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        tables(self.n).degree
    }

    pub fn hnf_rows(&self) -> &[ZRow] {
        &self.rows
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn unit(n: u64) -> Self {
        Self::principal(&CyclotomicElement::one(n))
    }

    pub fn zero(n: u64) -> Self {
        CycloIdeal {
            n,
            rows: vec![],
            den: BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::unit(self.n)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn principal(x: &CyclotomicElement) -> Self {
        Self::from_generators(x.conductor(), std::slice::from_ref(x))
    }

    pub fn from_integer(n: u64, k: impl Into<BigInt>) -> Self {
        Self::principal(&CyclotomicElement::from_int(n, k))
    }

    /// The O-module generated by the given elements (embedded into conductor n).
    pub fn from_generators(n: u64, gens: &[CyclotomicElement]) -> Self {
        let gens: Vec<CyclotomicElement> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.embed(n))
            .collect();
        if gens.is_empty() {
            return Self::zero(n);
        }
        let den = gens
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(g.denominator()));
        let d = tables(n).degree;
        // the integral lattice contains N(den * g) for any generator g
        let modulus = gens
            .iter()
            .map(|g| g.scale_int(&den).norm().to_integer().abs())
            .min()
            .expect("nonempty");
        let mut b = HnfBuilder::with_modulus(d, modulus);
        for g in &gens {
            for i in 0..d {
                let z = g * &CyclotomicElement::zeta_pow(n, i as i64);
                b.insert(row_of(&z, &den));
            }
        }
        Self::canonical(n, b.finish(), den)
    }

    /// Lattice spanned by rational row vectors (must be an O-module of full rank).
    pub fn from_rational_lattice(n: u64, rows: &[Vec<BigRational>]) -> Self {
        let den = rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let d = tables(n).degree;
        let int_rows = rows
            .iter()
            .map(|r| r.iter().map(|q| q.numer() * (&den / q.denom())).collect());
        let h = hnf(int_rows, d);
        Self::canonical(n, h, den)
    }

    pub fn basis(&self) -> Vec<CyclotomicElement> {
        self.rows
            .iter()
            .map(|r| CyclotomicElement::from_parts(self.n, r.clone(), self.den.clone()))
            .collect()
    }

    /// |det(rows)| as the index of the integral lattice den*I in O.
    fn int_index(&self) -> BigInt {
        det(&self.rows).abs()
    }

    pub fn norm(&self) -> BigRational {
        assert!(!self.is_zero(), "norm of the zero ideal");
        let d = self.degree() as u32;
        BigRational::new(self.int_index(), self.den.pow(d))
    }

    /// Membership of an element.
    pub fn contains(&self, x: &CyclotomicElement) -> bool {
        let x = x.embed(self.n);
        if x.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        // x in (1/den) L  iff  den * x in L
        let y = x.scale_int(&self.den);
        if !y.is_integral() {
            return false;
        }
        lattice_contains(&self.rows, y.numerators())
    }

    pub fn contains_ideal(&self, o: &Self) -> bool {
        assert_eq!(self.n, o.n);
        o.basis().iter().all(|b| self.contains(b))
    }

    /// A small set of generators as an O-module.
    pub fn o_generators(&self) -> Vec<CyclotomicElement> {
        if self.is_zero() {
            return vec![];
        }
        let n = self.n;
        let mut gens = vec![CyclotomicElement::from_int(n, self.int_index())
            .scale(&BigRational::new(BigInt::one(), self.den.clone()))];
        let mut span = Self::from_generators(n, &gens);
        for b in self.basis() {
            if span == *self {
                break;
            }
            if !span.contains(&b) {
                gens.push(b);
                span = Self::from_generators(n, &gens);
            }
        }
        debug_assert_eq!(span, *self);
        gens
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let mut g = a.basis();
        g.extend(b.basis());
        let den = a.den.lcm(&b.den);
        let rows = g
            .iter()
            .map(|x| row_of(x, &den))
            .collect::<Vec<_>>();
        Self::canonical(a.n, hnf(rows, a.degree()), den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        if a.is_zero() || b.is_zero() {
            return Self::zero(a.n);
        }
        let modulus = a.int_index() * b.int_index();
        let den = &a.den * &b.den;
        let d = a.degree();
        let mut builder = HnfBuilder::with_modulus(d, modulus);
        for g in a.o_generators() {
            let g = g.scale_int(&a.den);
            for r in &b.rows {
                let y = &g * &CyclotomicElement::from_parts(a.n, r.clone(), BigInt::one());
                builder.insert(y.numerators().to_vec());
            }
        }
        Self::canonical(a.n, builder.finish(), den)
    }

    pub fn mul_element(&self, x: &CyclotomicElement) -> Self {
        let n = lcm_u64(self.n, x.conductor());
        let s = if n == self.n { self.clone() } else { self.embed(n) };
        if x.is_zero() || s.is_zero() {
            return Self::zero(n);
        }
        let x = x.embed(n);
        let prods: Vec<Vec<BigRational>> = s
            .basis()
            .iter()
            .map(|b| (b * &x).coeffs())
            .collect();
        Self::from_rational_lattice(n, &prods)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::unit(self.n);
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// {x : Tr(x I) in Z}.
    pub fn trace_dual(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = tables(self.n);
        let d = t.degree;
        let n = self.n as usize;
        let basis: Vec<Vec<BigRational>> = self.basis().iter().map(|b| b.coeffs()).collect();
        // M = B * T, T_ij = Tr(zeta^(i+j))
        let m: Vec<Vec<BigRational>> = basis
            .iter()
            .map(|b| {
                (0..d)
                    .map(|j| {
                        (0..d).fold(BigRational::zero(), |acc, i| {
                            acc + &b[i] * BigRational::from_integer(t.traces[(i + j) % n].into())
                        })
                    })
                    .collect()
            })
            .collect();
        let inv = inverse_rational(&m).ok_or(Error::DivisionByZero)?;
        // dual basis = columns of M^{-1}
        let rows: Vec<Vec<BigRational>> = (0..d)
            .map(|j| (0..d).map(|i| inv[i][j].clone()).collect())
            .collect();
        Ok(Self::from_rational_lattice(self.n, &rows))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.trace_dual()?.mul_element(&different_generator(self.n)))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn embed(&self, m: u64) -> Self {
        if m == self.n {
            return self.clone();
        }
        let gens = self.o_generators();
        Self::from_generators(m, &gens)
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        if self.n == o.n {
            (self.clone(), o.clone())
        } else {
            let m = lcm_u64(self.n, o.n);
            (self.embed(m), o.embed(m))
        }
    }

    /// Valuations at the primes above p, in the order of `primes_above`.
    pub fn p_valuation(&self, p: u64) -> Result<Vec<i64>> {
        if self.is_zero() {
            return Err(Error::Invalid("valuation of the zero ideal".into()));
        }
        let primes = primes_above(self.n, p);
        let int = CycloIdeal {
            n: self.n,
            rows: self.rows.clone(),
            den: BigInt::one(),
        };
        let vden = val_bigint(&self.den, p).unwrap_or(0) as i64;
        Ok(primes
            .iter()
            .map(|pr| pr.valuation_integral(&int) as i64 - pr.e as i64 * vden)
            .collect())
    }

    pub fn is_coprime_to(&self, p: u64) -> Result<bool> {
        Ok(self.p_valuation(p)?.iter().all(|&v| v == 0))
    }

    /// Product of P^{v_P(I)} over the primes P above p.
    pub fn p_part(&self, p: u64) -> Result<Self> {
        let vs = self.p_valuation(p)?;
        let mut acc = Self::unit(self.n);
        for (pr, v) in primes_above(self.n, p).iter().zip(vs) {
            acc = acc.mul(&pr.ideal.pow(v)?);
        }
        Ok(acc)
    }
}

impl fmt::Display for CycloIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "(0)");
        }
        let gens = self.o_generators();
        let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn lattice_contains(rows: &[ZRow], v: &[BigInt]) -> bool {
    let mut v: Vec<BigInt> = v.to_vec();
    for r in rows {
        let Some(c) = r.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if v[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = v[c].div_rem(&r[c]);
        if !rem.is_zero() {
            return false;
        }
        if !q.is_zero() {
            for j in c..v.len() {
                let t = &q * &r[j];
                v[j] -= t;
            }
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// Phi_n'(zeta_n), a generator of the different of Q(zeta_n).
pub fn different_generator(n: u64) -> CyclotomicElement {
    let t = tables(n);
    let terms: Vec<(i64, i64)> = t
        .phi
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| ((k - 1) as i64, c * k as i64))
        .collect();
    CyclotomicElement::from_exponents(n, &terms)
}

/// Discriminant of Q(zeta_n).
pub fn discriminant(n: u64) -> BigInt {
    let phi = euler_phi(n);
    let mut num = BigInt::from(n).pow(phi as u32);
    for (p, _) in factorize(n) {
        num /= BigInt::from(p).pow((phi / (p - 1)) as u32);
    }
    if (phi / 2) % 2 == 1 {
        -num
    } else {
        num
    }
}

/// The inverse different, computed as the trace dual of O and checked
/// against (1 / Phi_n'(zeta)) O and the discriminant.
pub fn inverse_different(n: u64) -> CycloIdeal {
    let dual = CycloIdeal::unit(n).trace_dual().expect("O is nonzero");
    let g = different_generator(n).inv().expect("separable");
    let principal = CycloIdeal::principal(&g);
    assert_eq!(dual, principal, "two constructions of the inverse different disagree");
    assert_eq!(
        dual.norm().recip(),
        BigRational::from_integer(discriminant(n).abs()),
        "norm of the different must equal |disc|"
    );
    dual
}

/// A prime of Z[zeta_n] above p, given by Kummer-Dedekind as (p, g(zeta)).
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u64,
    pub f: u64,
    pub generator: CyclotomicElement,
    pub ideal: CycloIdeal,
}

impl PrimeIdeal {
    pub fn residue_norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f as u32)
    }

    /// v_P of a nonzero integral ideal.
    pub fn valuation_integral(&self, i: &CycloIdeal) -> u64 {
        debug_assert!(i.is_integral());
        let vn = val_bigint(&i.int_index(), self.p).unwrap_or(0) as u64;
        let bound = vn / self.f;
        let mut t = 0;
        let mut cur = CycloIdeal::unit(i.n);
        while t < bound {
            let next = cur.mul(&self.ideal);
            if !next.contains_ideal(i) {
                break;
            }
            cur = next;
            t += 1;
        }
        t
    }

    pub fn valuation(&self, i: &CycloIdeal) -> Result<i64> {
        let primes = primes_above(i.n, self.p);
        let idx = primes
            .iter()
            .position(|q| q.ideal == self.ideal)
            .ok_or_else(|| Error::Invalid("prime not above this conductor".into()))?;
        Ok(i.p_valuation(self.p)?[idx])
    }
}

/// All primes of Z[zeta_n] above p, in canonical order.
pub fn primes_above(n: u64, p: u64) -> Vec<PrimeIdeal> {
    let k = if n % p == 0 { val_u64(n, p) } else { 0 };
    let m = n / p.pow(k);
    let e = euler_phi(p.pow(k));
    let f = if m <= 2 { 1 } else { mult_order(p % m, m) };
    let factors = factor_cyclotomic_mod_p(m, p);
    factors
        .into_iter()
        .map(|g| {
            let terms: Vec<(i64, i64)> = g
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64, c as i64))
                .collect();
            let gen = CyclotomicElement::from_exponents(n, &terms);
            let ideal = CycloIdeal::from_generators(
                n,
                &[CyclotomicElement::from_int(n, p as i64), gen.clone()],
            );
            PrimeIdeal {
                p,
                e,
                f,
                generator: gen,
                ideal,
            }
        })
        .collect()
}

/// JSON form of an ideal.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IdealRepr {
    pub conductor: u64,
    pub hnf_rows: Vec<Vec<String>>,
    pub denominator: String,
}

impl From<&CycloIdeal> for IdealRepr {
    fn from(i: &CycloIdeal) -> Self {
        IdealRepr {
            conductor: i.n,
            hnf_rows: i
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
            denominator: i.den.to_string(),
        }
    }
}

impl TryFrom<IdealRepr> for CycloIdeal {
    type Error = Error;
    fn try_from(r: IdealRepr) -> Result<Self> {
        let parse = |s: &str| -> Result<BigInt> {
            s.parse()
                .map_err(|_| Error::Schema(format!("bad integer '{s}'")))
        };
        let den = parse(&r.denominator)?;
        if !den.is_positive() {
            return Err(Error::Schema("denominator must be positive".into()));
        }
        let d = tables(r.conductor).degree;
        let mut rows = Vec::new();
        for row in &r.hnf_rows {
            if row.len() != d {
                return Err(Error::Schema(format!("ideal rows must have length {d}")));
            }
            rows.push(row.iter().map(|s| parse(s)).collect::<Result<ZRow>>()?);
        }
        let h = hnf(rows.clone(), d);
        let i = CycloIdeal::canonical(r.conductor, h, den);
        // must be an O-module
        let z = CyclotomicElement::zeta(r.conductor);
        if i.basis().iter().any(|b| !i.contains(&(b * &z))) {
            return Err(Error::Schema("lattice is not closed under zeta".into()));
        }
        Ok(i)
    }
}

impl Serialize for CycloIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IdealRepr::deserialize(d)?;
        CycloIdeal::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: u64, t: &[(i64, i64)]) -> CyclotomicElement {
        CyclotomicElement::from_exponents(n, t)
    }

    #[test]
    fn gaussian_integers() {
        let two = CycloIdeal::from_integer(4, 2);
        let three = CycloIdeal::from_integer(4, 3);
        assert_eq!(two.mul(&three), CycloIdeal::from_integer(4, 6));
        let pi = CycloIdeal::principal(&el(4, &[(0, 1), (1, 1)]));
        assert_eq!(pi.mul(&pi), two);
        assert_eq!(pi.p_valuation(2).unwrap(), vec![1]);
        assert_eq!(two.p_valuation(2).unwrap(), vec![2]);
        assert_eq!(three.p_valuation(3).unwrap(), vec![1]);
        assert_eq!(CycloIdeal::from_integer(4, 5).p_valuation(5).unwrap(), vec![1, 1]);
    }

    #[test]
    fn inverses() {
        for n in [3u64, 4, 5, 7, 8, 12, 15] {
            let x = el(n, &[(0, 3), (1, 2), (2, -1)]);
            let y = el(n, &[(0, 7), (1, 1)]);
            let i = CycloIdeal::from_generators(n, &[x, y]);
            let inv = i.inverse().unwrap();
            assert!(i.mul(&inv).is_unit(), "n={n}");
        }
    }

    #[test]
    fn inverse_different_norms() {
        assert!(inverse_different(1).is_unit());
        assert_eq!(
            inverse_different(4).norm(),
            BigRational::new(1.into(), 4.into())
        );
        assert_eq!(
            inverse_different(3).norm(),
            BigRational::new(1.into(), 3.into())
        );
        for n in [5u64, 8, 9, 12, 16, 20, 23] {
            let _ = inverse_different(n);
        }
    }

    #[test]
    fn prime_decomposition_in_q_zeta_23() {
        // 47 = 2*23 + 1 splits completely
        assert_eq!(primes_above(23, 47).len(), 22);
        // 2 has order 11 mod 23
        let ps = primes_above(23, 2);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].f, 11);
        assert_eq!(ps[0].ideal.norm(), BigRational::from_integer(BigInt::from(2048)));
        let prod = ps[0].ideal.mul(&ps[1].ideal);
        assert_eq!(prod, CycloIdeal::from_integer(23, 2));
    }

    #[test]
    fn ramified_valuations() {
        let ps = primes_above(9, 3);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].e, 6);
        assert_eq!(CycloIdeal::from_integer(9, 3).p_valuation(3).unwrap(), vec![6]);
        let third = CycloIdeal::from_integer(9, 1)
            .mul_element(&CyclotomicElement::from_int(9, 1).scale(&BigRational::new(1.into(), 3.into())));
        assert_eq!(third.p_valuation(3).unwrap(), vec![-6]);
    }

    #[test]
    fn serde_round_trip() {
        let i = CycloIdeal::from_generators(5, &[el(5, &[(0, 2)]), el(5, &[(0, 1), (1, -1)])]);
        let js = serde_json::to_string(&i).unwrap();
        let j: CycloIdeal = serde_json::from_str(&js).unwrap();
        assert_eq!(i, j);
    }
}
