use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

/// sum_g c_g g in Q(zeta)[G], one coefficient per element index.
#[derive(Clone, Debug)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<CyclotomicElement>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, o: &Self) -> bool {
        *self.group == *o.group && self.coeffs == o.coeffs
    }
}

impl GroupRingElement {
    pub(crate) fn from_parts(group: &Arc<FiniteGroup>, coeffs: Vec<CyclotomicElement>) -> Self {
        debug_assert_eq!(coeffs.len(), group.order());
        GroupRingElement {
            group: group.clone(),
            coeffs,
        }
    }

    pub fn new(group: &Arc<FiniteGroup>, coeffs: Vec<CyclotomicElement>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Invalid(format!(
                "expected {} coefficients, got {}",
                group.order(),
                coeffs.len()
            )));
        }
        Ok(Self::from_parts(group, coeffs))
    }

    pub fn from_rationals(group: &Arc<FiniteGroup>, coeffs: &[BigRational]) -> Result<Self> {
        Self::new(group, coeffs.iter().map(|q| CyclotomicElement::from_rational(1, q)).collect())
    }

    pub fn from_ints(group: &Arc<FiniteGroup>, coeffs: &[i64]) -> Result<Self> {
        Self::new(group, coeffs.iter().map(|&k| CyclotomicElement::from_int(1, k)).collect())
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        Self::from_parts(group, vec![CyclotomicElement::zero(1); group.order()])
    }

    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        Self::basis(group, 0)
    }

    /// The group element x itself.
    pub fn basis(group: &Arc<FiniteGroup>, x: usize) -> Self {
        let mut z = Self::zero(group);
        z.coeffs[x] = CyclotomicElement::one(1);
        z
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[CyclotomicElement] {
        &self.coeffs
    }

    pub fn coeff(&self, x: usize) -> &CyclotomicElement {
        &self.coeffs[x]
    }

    fn zip(&self, o: &Self, f: impl Fn(&CyclotomicElement, &CyclotomicElement) -> CyclotomicElement) -> Self {
        assert!(*self.group == *o.group, "group-ring elements of different groups");
        Self::from_parts(
            &self.group,
            self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| f(a, b)).collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(&self.group, self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert!(*self.group == *o.group, "group-ring elements of different groups");
        let g = &self.group;
        let mut out = vec![CyclotomicElement::zero(1); g.order()];
        for (a, x) in self.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, y) in o.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let ab = g.mul(a, b);
                out[ab] = &out[ab] + &(x * y);
            }
        }
        Self::from_parts(g, out)
    }

    pub fn scale(&self, c: &CyclotomicElement) -> Self {
        Self::from_parts(&self.group, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        Self::from_parts(&self.group, self.coeffs.iter().map(|a| a.scale(q)).collect())
    }

    /// Apply zeta -> zeta^a to every coefficient.
    pub fn galois(&self, a: i64) -> Self {
        Self::from_parts(&self.group, self.coeffs.iter().map(|c| c.galois(a)).collect())
    }

    /// sum c_g g^-1.
    pub fn antipode(&self) -> Self {
        let g = &self.group;
        let mut out = vec![CyclotomicElement::zero(1); g.order()];
        for (x, c) in self.coeffs.iter().enumerate() {
            out[g.inv(x)] = c.clone();
        }
        Self::from_parts(g, out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficients constant on conjugacy classes.
    pub fn is_central(&self) -> bool {
        let g = &self.group;
        g.classes()
            .iter()
            .all(|cl| cl.iter().all(|&x| self.coeffs[x] == self.coeffs[cl[0]]))
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.to_rational().is_some())
    }

    pub fn rational_coeffs(&self) -> Result<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| {
                c.to_rational()
                    .ok_or_else(|| Error::NotRational(format!("coefficient {c} is irrational")))
            })
            .collect()
    }

    /// Every coefficient lies in Z_(p).
    pub fn is_p_integral(&self, p: u64) -> Result<bool> {
        let pb = BigInt::from(p);
        Ok(self
            .rational_coeffs()?
            .iter()
            .all(|q| (q.denom() % &pb) != BigInt::from(0)))
    }

    /// Least common denominator of the (rational) coefficients.
    pub fn denominator(&self) -> Result<BigInt> {
        use num_integer::Integer;
        Ok(self
            .rational_coeffs()?
            .iter()
            .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom())))
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*g{x}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
