use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::int::{euler_phi, gcd_u64, lcm_u64, moebius, units_mod};
use crate::arith::polyfp::cyclotomic_poly;
use crate::error::{Error, Result};

/// Per-conductor data: Phi_n and the power-basis coordinates of zeta^k for k < n.
#[derive(Debug)]
pub struct Tables {
    pub n: u64,
    pub degree: usize,
    pub phi: Vec<i64>,
    pub powers: Vec<Vec<i64>>,
    pub units: Vec<u64>,
    /// Tr(zeta^k) for k < n.
    pub traces: Vec<i64>,
}

pub fn tables(n: u64) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let t = Arc::new(build_tables(n));
    cache.lock().unwrap().insert(n, t.clone());
    t
}

fn build_tables(n: u64) -> Tables {
    assert!(n >= 1);
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; d];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by zeta: shift up, fold the top coefficient through Phi_n
        let top = cur[d - 1];
        for i in (1..d).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..d {
                cur[i] -= top * phi[i];
            }
        }
    }
    let traces = (0..n)
        .map(|k| {
            let g = gcd_u64(k, n);
            let q = n / g;
            moebius(q) * (euler_phi(n) / euler_phi(q)) as i64
        })
        .collect();
    Tables {
        n,
        degree: d,
        phi,
        powers,
        units: units_mod(n).into_iter().map(|u| if n == 1 { 1 } else { u }).collect(),
        traces,
    }
}

/// An element of Q(zeta_n), stored as integer coordinates on the power basis
/// 1, zeta, ..., zeta^(phi(n)-1) over a positive common denominator.
#[derive(Clone, Debug)]
pub struct CyclotomicElement {
    n: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicElement {
    fn normalized(n: u64, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -&*x;
            }
        }
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if num.iter().all(|x| x.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            for x in num.iter_mut() {
                *x /= &g;
            }
            den /= &g;
        }
        CyclotomicElement { n, num, den }
    }

    pub fn from_parts(n: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        assert_eq!(num.len(), tables(n).degree);
        assert!(!den.is_zero());
        Self::normalized(n, num, den)
    }

    pub fn zero(n: u64) -> Self {
        let d = tables(n).degree;
        CyclotomicElement {
            n,
            num: vec![BigInt::zero(); d],
            den: BigInt::one(),
        }
    }

    pub fn from_int(n: u64, k: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(n);
        z.num[0] = k.into();
        z
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, 1)
    }

    pub fn from_rational(n: u64, q: &BigRational) -> Self {
        let mut z = Self::zero(n);
        z.num[0] = q.numer().clone();
        Self::normalized(n, z.num, q.denom().clone())
    }

    /// zeta_n^k for any integer k.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let t = tables(n);
        let k = k.rem_euclid(n as i64) as usize;
        CyclotomicElement {
            n,
            num: t.powers[k].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn zeta(n: u64) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// Sum of c_k * zeta_n^k over the given (exponent, coefficient) pairs.
    pub fn from_exponents(n: u64, terms: &[(i64, i64)]) -> Self {
        let t = tables(n);
        let mut acc = vec![0i64; t.degree];
        for &(k, c) in terms {
            let row = &t.powers[k.rem_euclid(n as i64) as usize];
            for (a, &r) in acc.iter_mut().zip(row) {
                *a += c * r;
            }
        }
        CyclotomicElement {
            n,
            num: acc.into_iter().map(BigInt::from).collect(),
            den: BigInt::one(),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.num.len()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|x| BigRational::new(x.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|x| x.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|x| x.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Integral in Z[zeta_n] (the power basis is an integral basis).
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Integral at every prime above p.
    pub fn is_p_integral(&self, p: u64) -> bool {
        !(&self.den % BigInt::from(p)).is_zero() || self.den.is_one()
    }

    /// The same element viewed in Q(zeta_m) for a multiple m of the conductor.
    pub fn embed(&self, m: u64) -> Self {
        if m == self.n {
            return self.clone();
        }
        assert_eq!(m % self.n, 0, "target conductor must be a multiple");
        let step = (m / self.n) as usize;
        let t = tables(m);
        let mut acc = vec![BigInt::zero(); t.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.powers[i * step];
            for (a, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    *a += c * r;
                }
            }
        }
        CyclotomicElement {
            n: m,
            num: acc,
            den: self.den.clone(),
        }
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        if self.n == o.n {
            (self.clone(), o.clone())
        } else {
            let m = lcm_u64(self.n, o.n);
            (self.embed(m), o.embed(m))
        }
    }

    fn add_impl(&self, o: &Self, sign: i32) -> Self {
        if self.n != o.n {
            let (a, b) = self.common(o);
            return a.add_impl(&b, sign);
        }
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(x, y)| {
                let t = y * &self.den;
                let s = x * &o.den;
                if sign > 0 {
                    s + t
                } else {
                    s - t
                }
            })
            .collect();
        Self::normalized(self.n, num, &self.den * &o.den)
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.n != o.n {
            let (a, b) = self.common(o);
            return a.mul_impl(&b);
        }
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.n);
        }
        let t = tables(self.n);
        let d = t.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (a, &r) in out.iter_mut().zip(&t.powers[k % t.powers.len()]) {
                if r != 0 {
                    *a += c * r;
                }
            }
        }
        Self::normalized(self.n, out, &self.den * &o.den)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|x| x * q.numer()).collect();
        Self::normalized(self.n, num, &self.den * q.denom())
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let num = self.num.iter().map(|x| x * k).collect();
        Self::normalized(self.n, num, self.den.clone())
    }

    /// The automorphism zeta -> zeta^a (a is taken modulo the conductor and
    /// must be a unit).
    pub fn galois(&self, a: i64) -> Self {
        let n = self.n as i64;
        let a = a.rem_euclid(n);
        debug_assert!(n == 1 || gcd_u64(a as u64, n as u64) == 1, "not a unit");
        if a == 1 || self.n <= 2 {
            return self.clone();
        }
        let t = tables(self.n);
        let mut acc = vec![BigInt::zero(); t.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.powers[((i as i64 * a) % n) as usize];
            for (x, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    *x += c * r;
                }
            }
        }
        CyclotomicElement {
            n: self.n,
            num: acc,
            den: self.den.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn trace(&self) -> BigRational {
        let t = tables(self.n);
        let s: BigInt = self
            .num
            .iter()
            .enumerate()
            .map(|(i, c)| c * t.traces[i])
            .sum();
        BigRational::new(s, self.den.clone())
    }

    /// Product of the conjugates other than the identity.
    fn adjugate(&self) -> Self {
        let t = tables(self.n);
        let mut acc = Self::one(self.n);
        for &u in &t.units {
            if u != 1 {
                acc = acc.mul_impl(&self.galois(u as i64));
            }
        }
        acc
    }

    pub fn norm(&self) -> BigRational {
        self.mul_impl(&self.adjugate())
            .to_rational()
            .expect("norm is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let adj = self.adjugate();
        let nrm = self.mul_impl(&adj).to_rational().expect("norm is rational");
        Ok(adj.scale(&nrm.recip()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul_impl(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.n);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&b);
            }
            b = b.mul_impl(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Smallest conductor m | n (up to the 2 mod 4 identification) such that
    /// the element lies in Q(zeta_m).
    pub fn minimal_conductor(&self) -> u64 {
        let n = self.n;
        let mut best = n;
        for m in crate::arith::int::divisors(n) {
            if m >= best {
                break;
            }
            // fixed by every automorphism that is trivial on zeta_m
            let fixed = tables(n)
                .units
                .iter()
                .filter(|&&u| (u % m) == 1 % m)
                .all(|&u| self.galois(u as i64) == *self);
            if fixed {
                best = m;
            }
        }
        best
    }

    /// Rewrite in the smallest cyclotomic field containing the element.
    pub fn simplify(&self) -> Self {
        let m = self.minimal_conductor();
        if m == self.n {
            return self.clone();
        }
        // solve for coordinates in Q(zeta_m): the embedding is injective and
        // maps power-basis vectors to known rows, so match by linear algebra
        let tm = tables(m);
        let basis: Vec<Self> = (0..tm.degree)
            .map(|k| Self::zeta_pow(m, k as i64).embed(self.n))
            .collect();
        let rows: Vec<Vec<BigRational>> = basis.iter().map(|b| b.coeffs()).collect();
        let target = self.coeffs();
        let coeffs = solve_rational(&rows, &target).expect("element lies in the subfield");
        let den = coeffs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = coeffs
            .iter()
            .map(|q| q.numer() * (&den / q.denom()))
            .collect();
        Self::normalized(m, num, den)
    }
}

/// Solve x * rows = target for x (rows are linearly independent).
fn solve_rational(rows: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = rows.len();
    let n = target.len();
    // columns = equations; unknowns = k
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut r: Vec<BigRational> = (0..k).map(|i| rows[i][j].clone()).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let mut row = 0;
    let mut piv_cols = Vec::new();
    for c in 0..k {
        let Some(p) = (row..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let pv = a[row][c].clone();
        for x in a[row].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..n {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
            }
        }
        piv_cols.push(c);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &c) in piv_cols.iter().enumerate() {
        x[c] = a[r][k].clone();
    }
    Some(x)
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, o: &Self) -> bool {
        if self.n == o.n {
            self.den == o.den && self.num == o.num
        } else {
            let (a, b) = self.common(o);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for CyclotomicElement {}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CyclotomicElement> for &CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, o: &CyclotomicElement) -> CyclotomicElement {
                let f: fn(&CyclotomicElement, &CyclotomicElement) -> CyclotomicElement = $body;
                f(self, o)
            }
        }
        impl $tr<CyclotomicElement> for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, o: CyclotomicElement) -> CyclotomicElement {
                (&self).$m(&o)
            }
        }
        impl $tr<&CyclotomicElement> for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $m(self, o: &CyclotomicElement) -> CyclotomicElement {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_impl(b, 1));
binop!(Sub, sub, |a, b| a.add_impl(b, -1));
binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            n: self.n,
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        -&self
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), self.den.clone());
            let (neg, mag) = if q.is_negative() { (true, -q) } else { (false, q) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => format!("z{}", self.n),
                _ => format!("z{}^{}", self.n, i),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

/// JSON form: conductor plus rational coefficients on the power basis.
#[derive(Serialize, Deserialize)]
struct ElementRepr {
    conductor: u64,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            conductor: self.n,
            coeffs: self.coeffs().iter().map(|q| q.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        parse_element(r.conductor, &r.coeffs).map_err(serde::de::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_element(n: u64, coeffs: &[String]) -> Result<CyclotomicElement> {
    if n == 0 {
        return Err(Error::Schema("conductor must be positive".into()));
    }
    let d = tables(n).degree;
    if coeffs.len() > d {
        return Err(Error::Schema(format!(
            "conductor {n} allows {d} coefficients, got {}",
            coeffs.len()
        )));
    }
    let qs = coeffs
        .iter()
        .map(|c| parse_rational(c))
        .collect::<Result<Vec<_>>>()?;
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut num: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    num.resize(d, BigInt::zero());
    Ok(CyclotomicElement::normalized(n, num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn field_examples() {
        let z3 = CyclotomicElement::zeta(3);
        assert_eq!(&z3 + &(&z3 * &z3), CyclotomicElement::from_int(3, -1));
        let z5 = CyclotomicElement::zeta(5);
        assert_eq!(z5.galois(2), CyclotomicElement::zeta_pow(5, 2));
        let z8 = CyclotomicElement::zeta(8);
        let one = CyclotomicElement::one(8);
        let lhs = (&one + &z8) * (&one + &z8.conj());
        let rhs = CyclotomicElement::from_exponents(8, &[(0, 2), (1, 1), (7, 1)]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn traces() {
        assert_eq!(CyclotomicElement::one(3).trace(), q(2, 1));
        assert_eq!(CyclotomicElement::zeta(3).trace(), q(-1, 1));
        assert_eq!(CyclotomicElement::zeta(8).trace(), q(0, 1));
        let x = CyclotomicElement::from_exponents(12, &[(0, 3), (1, -2), (5, 7)]);
        let s = tables(12)
            .units
            .iter()
            .fold(CyclotomicElement::zero(12), |acc, &u| acc + x.galois(u as i64));
        assert_eq!(s.to_rational().unwrap(), x.trace());
    }

    #[test]
    fn inverse_and_norm() {
        let x = CyclotomicElement::from_exponents(7, &[(0, 2), (1, 1), (3, -1)]);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let a = CyclotomicElement::from_exponents(5, &[(0, 1), (1, -1)]);
        assert_eq!(a.norm(), q(5, 1));
        assert!(CyclotomicElement::zero(5).inv().is_err());
    }

    #[test]
    fn mixed_conductors_and_simplify() {
        let a = CyclotomicElement::zeta(3);
        let b = CyclotomicElement::zeta(4);
        let c = &a * &b;
        assert_eq!(c.conductor(), 12);
        assert_eq!(c, CyclotomicElement::zeta_pow(12, 7));
        let s = CyclotomicElement::zeta_pow(12, 4).simplify();
        assert_eq!(s.conductor(), 3);
        assert_eq!(s, CyclotomicElement::zeta(3));
        // sqrt(-3) = 2 zeta_3 + 1 lies in Q(zeta_3)
        let r = CyclotomicElement::from_exponents(6, &[(1, 2), (0, -1)]);
        assert_eq!(r.simplify().conductor(), 3);
    }

    #[test]
    fn serde_round_trip() {
        let x = CyclotomicElement::from_exponents(5, &[(0, 1), (2, 3)]).scale(&q(1, 6));
        let js = serde_json::to_string(&x).unwrap();
        let y: CyclotomicElement = serde_json::from_str(&js).unwrap();
        assert_eq!(x, y);
        assert_eq!(format!("{}", CyclotomicElement::from_int(3, -1)), "-1");
    }
}
