use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annihilator::{ClassGroupData, Source};
use crate::arith::int::{factorize, is_fundamental_negative, xgcd_i64};
use crate::error::{Error, Result};
use crate::groups::catalog_group;
use crate::twistcohom::GModule;

/// A positive definite binary quadratic form ax^2 + bxy + cy^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    xgcd_i64(a, b).0.abs()
}

impl FormClass {
    /// b^2 - 4ac.
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let FormClass { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn reduce(self) -> Self {
        let d = self.discriminant();
        let FormClass { mut a, mut b, mut c } = self;
        loop {
            // bring b into (-a, a]
            if b <= -a || b > a {
                let k = (a - b).div_euclid(2 * a);
                b += 2 * k * a;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return FormClass { a, b, c };
        }
    }

    /// The identity class of discriminant -d.
    pub fn principal(d: u64) -> Self {
        let d = d as i64;
        if d % 4 == 0 {
            FormClass { a: 1, b: 0, c: d / 4 }
        } else {
            FormClass { a: 1, b: 1, c: (1 + d) / 4 }
        }
    }

    pub fn inverse(self) -> Self {
        FormClass { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Gauss composition (Dirichlet's united forms), reduced.
    pub fn compose(self, o: Self) -> Self {
        let disc = self.discriminant();
        let (f1, f2) = if self.a > o.a { (o, self) } else { (self, o) };
        let (a1, b1) = (f1.a, f1.b);
        let (a2, b2, c2) = (f2.a, f2.b, f2.c);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (d, u, _) = xgcd_i64(a2, a1);
            (u, d)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let (d1, x2, y2) = xgcd_i64(s, d);
            (x2, -y2, d1)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = ((y1 as i128 * y2 as i128 * n as i128 - x2 as i128 * c2 as i128).rem_euclid(v1 as i128)) as i64;
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 as i128 * b3 as i128 - disc as i128) / (4 * a3 as i128);
        FormClass { a: a3, b: b3, c: c3 as i64 }.reduce()
    }

    pub fn pow(self, k: u64) -> Self {
        let d = (-self.discriminant()) as u64;
        let mut acc = Self::principal(d);
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(base);
            }
            base = base.compose(base);
            k >>= 1;
        }
        acc
    }
}

/// All reduced primitive forms of discriminant -d.
pub fn reduced_forms(d: u64) -> Vec<FormClass> {
    let d = d as i64;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 || (b * b + d) % (4 * a) != 0 {
                continue;
            }
            let f = FormClass { a, b, c: (b * b + d) / (4 * a) };
            if f.is_reduced() && gcd(gcd(f.a, f.b), f.c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

/// Number of roots of unity in Q(sqrt(-d)).
pub fn roots_of_unity(d: u64) -> u64 {
    match d {
        3 => 6,
        4 => 4,
        _ => 2,
    }
}

/// The form class group of discriminant -d with a basis of forms matching
/// its invariant factors.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub d: u64,
    pub forms: Vec<FormClass>,
    pub invariants: Vec<u64>,
    pub basis: Vec<FormClass>,
    index: HashMap<FormClass, usize>,
    table: Vec<Vec<usize>>,
}

pub fn form_class_group(d: u64) -> Result<FormClassGroup> {
    if !is_fundamental_negative(d) {
        return Err(Error::Invalid(format!("-{d} is not a fundamental discriminant")));
    }
    let forms = reduced_forms(d);
    let index: HashMap<FormClass, usize> = forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let table: Vec<Vec<usize>> = forms
        .iter()
        .map(|&f| {
            forms
                .iter()
                .map(|&g| *index.get(&f.compose(g)).expect("composition of reduced forms is reduced"))
                .collect()
        })
        .collect();
    let mut cg = FormClassGroup {
        d,
        forms,
        invariants: Vec::new(),
        basis: Vec::new(),
        index,
        table,
    };
    cg.invariants = cg.structure();
    cg.basis = cg.find_basis().ok_or_else(|| Error::Inconsistent("no basis matches the invariants".into()))?;
    Ok(cg)
}

impl FormClassGroup {
    pub fn h(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn w(&self) -> u64 {
        roots_of_unity(self.d)
    }

    pub fn identity(&self) -> usize {
        self.index[&FormClass::principal(self.d)]
    }

    pub fn index_of(&self, f: &FormClass) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    fn power(&self, x: usize, k: u64) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, x))
    }

    pub fn order_of(&self, x: usize) -> u64 {
        let e = self.identity();
        let mut y = x;
        let mut k = 1;
        while y != e {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Invariant factors d_1 | d_2 | ... read off from the counts
    /// #{x : p^k x = 0} = p^{sum_i min(k, e_i)}.
    fn structure(&self) -> Vec<u64> {
        let orders: Vec<u64> = (0..self.forms.len()).map(|x| self.order_of(x)).collect();
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, e) in factorize(self.h()) {
            let mut ranks = Vec::new();
            let mut prev = 0u32;
            for k in 1..=e {
                let q = p.pow(k);
                let n = orders.iter().filter(|&&o| q % o == 0 && o.is_power_of_prime(p)).count() as u64;
                let logn = n.ilog(p);
                ranks.push(logn - prev);
                prev = logn;
            }
            // ranks[k-1] = #{i : e_i >= k}; exponents in descending order
            let r = ranks[0] as usize;
            let exps: Vec<u32> = (0..r)
                .map(|i| ranks.iter().filter(|&&c| c as usize > i).count() as u32)
                .collect();
            per_prime.push((p, exps));
        }
        let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut inv: Vec<u64> = (0..len)
            .map(|i| per_prime.iter().map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k))).product())
            .collect();
        inv.reverse();
        inv
    }

    fn span_size(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.forms.len()];
        let mut stack = vec![self.identity()];
        seen[self.identity()] = true;
        let mut n = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    n += 1;
                    stack.push(y);
                }
            }
        }
        n
    }

    fn find_basis(&self) -> Option<Vec<FormClass>> {
        let mut chosen = Vec::new();
        if self.search(&mut chosen) {
            Some(chosen.iter().map(|&i| self.forms[i]).collect())
        } else {
            None
        }
    }

    fn search(&self, chosen: &mut Vec<usize>) -> bool {
        let k = chosen.len();
        if k == self.invariants.len() {
            return true;
        }
        let want: u64 = self.invariants[..=k].iter().product();
        for x in 0..self.forms.len() {
            if self.order_of(x) != self.invariants[k] {
                continue;
            }
            chosen.push(x);
            if self.span_size(chosen) as u64 == want && self.search(chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Coordinates of a class in the basis; brute force over the small group.
    pub fn coordinates(&self, f: &FormClass) -> Option<Vec<i64>> {
        let target = self.index_of(f)?;
        let n = self.invariants.len();
        let mut idx = vec![0u64; n];
        loop {
            let x = idx
                .iter()
                .zip(&self.basis)
                .fold(self.identity(), |acc, (&k, b)| self.mul(acc, self.power(self.index[b], k)));
            if x == target {
                return Some(idx.iter().map(|&k| k as i64).collect());
            }
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < self.invariants[pos] {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                return None;
            }
        }
    }

    /// The class group as a module for Gal(K/Q) = C2, the nontrivial element
    /// acting by inversion of forms.
    pub fn class_group_data(&self) -> Result<ClassGroupData> {
        let g = catalog_group("C2")?;
        let n = self.invariants.len();
        let mut sigma = vec![vec![0i64; n]; n];
        for (i, b) in self.basis.iter().enumerate() {
            let v = self
                .coordinates(&b.inverse())
                .ok_or_else(|| Error::Inconsistent("inverse form outside the group".into()))?;
            for (r, &x) in v.iter().enumerate() {
                sigma[r][i] = x;
            }
        }
        let module = GModule::from_generators(&g, self.invariants.clone(), &[1], &[sigma])?;
        let labels = self.basis.iter().map(|f| f.to_string()).collect();
        ClassGroupData::new(&format!("cl(Q(sqrt(-{})))", self.d), Source::FormsOracle, module, labels)
    }

    /// Apply c0 + c1 sigma to every class of p-power order by composition;
    /// returns a class with nonzero image, if any.
    pub fn annihilation_witness(&self, c0: i128, c1: i128, p: u64) -> Option<FormClass> {
        let h = self.h() as i128;
        let (e0, e1) = (c0.rem_euclid(h) as u64, c1.rem_euclid(h) as u64);
        let id = self.identity();
        (0..self.forms.len())
            .filter(|&x| self.order_of(x).is_power_of_prime(p))
            .find(|&x| {
                let inv = self.index[&self.forms[x].inverse()];
                self.mul(self.power(x, e0), self.power(inv, e1)) != id
            })
            .map(|x| self.forms[x])
    }
}

trait PrimePower {
    fn is_power_of_prime(self, p: u64) -> bool;
}

impl PrimePower for u64 {
    /// True for p^k, k >= 0.
    fn is_power_of_prime(mut self, p: u64) -> bool {
        while self % p == 0 {
            self /= p;
        }
        self == 1
    }
}
