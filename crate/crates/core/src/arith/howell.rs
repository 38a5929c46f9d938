//! Submodules of free modules over the local ring Z/p^a, kept in Howell form.
//!
//! A Howell basis is an echelon basis with pivots of the form p^v, entries to
//! the right of each pivot column reduced, and the extra property that every
//! element of the span whose first `c` coordinates vanish is a combination of
//! the basis rows with pivot column >= c. This makes membership, order and
//! kernel computations exact.

use super::int::{inv_mod, mul_mod};

/// The ring Z/p^a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalRing {
    pub p: u64,
    pub a: u32,
    pub q: u64,
}

impl LocalRing {
    pub fn new(p: u64, a: u32) -> Self {
        assert!(a >= 1);
        let q = p.checked_pow(a).expect("p^a fits in u64");
        assert!(q < (1u64 << 62), "modulus too large");
        LocalRing { p, a, q }
    }

    /// p-adic valuation of x mod q (a for zero).
    pub fn val(&self, x: u64) -> u32 {
        let mut x = x % self.q;
        if x == 0 {
            return self.a;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.q
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.q - y % self.q) % self.q
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        mul_mod(x, y, self.q)
    }

    pub fn neg(&self, x: u64) -> u64 {
        (self.q - x % self.q) % self.q
    }

    pub fn pow_p(&self, v: u32) -> u64 {
        if v >= self.a {
            0
        } else {
            self.p.pow(v)
        }
    }
}

pub type Vector = Vec<u64>;

/// `y += c * x` over the ring.
pub fn axpy(ring: &LocalRing, y: &mut [u64], c: u64, x: &[u64]) {
    if c == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = ring.add(*yi, ring.mul(c, xi));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Howell {
    pub ring: LocalRing,
    pub dim: usize,
    /// (pivot column, pivot valuation, row)
    rows: Vec<(usize, u32, Vector)>,
}

impl Howell {
    pub fn zero(ring: LocalRing, dim: usize) -> Self {
        Howell {
            ring,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn full(ring: LocalRing, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|c| {
                let mut v = vec![0; dim];
                v[c] = 1;
                v
            })
            .collect();
        Howell::span(ring, dim, rows)
    }

    /// Howell basis of the span of `gens`.
    pub fn span(ring: LocalRing, dim: usize, gens: Vec<Vector>) -> Self {
        let mut work: Vec<Vector> = gens
            .into_iter()
            .map(|mut g| {
                assert_eq!(g.len(), dim);
                for x in g.iter_mut() {
                    *x %= ring.q;
                }
                g
            })
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        let mut rows = Vec::new();
        for col in 0..dim {
            if work.is_empty() {
                break;
            }
            let best = work
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| ring.val(r[col]))
                .map(|(i, _)| i);
            let Some(bi) = best else { continue };
            let mut piv = work.swap_remove(bi);
            let v = ring.val(piv[col]);
            let pv = ring.pow_p(v);
            let unit = piv[col] / pv;
            let inv = inv_mod(unit % ring.q, ring.q).expect("unit part invertible");
            for x in piv.iter_mut() {
                *x = ring.mul(*x, inv);
            }
            debug_assert_eq!(piv[col], pv);
            for r in work.iter_mut() {
                if r[col] != 0 {
                    let f = r[col] / pv;
                    axpy(&ring, r, ring.neg(f), &piv);
                    debug_assert_eq!(r[col], 0);
                }
            }
            if v > 0 {
                let scale = ring.pow_p(ring.a - v);
                let extra: Vector = piv.iter().map(|&x| ring.mul(x, scale)).collect();
                if extra.iter().any(|&x| x != 0) {
                    work.push(extra);
                }
            }
            work.retain(|r| r.iter().any(|&x| x != 0));
            rows.push((col, v, piv));
        }
        // reduce entries sitting in later pivot columns
        for k in 0..rows.len() {
            let (c, v, piv) = rows[k].clone();
            let pv = ring.pow_p(v);
            for (_, _, row) in rows.iter_mut().take(k) {
                let f = row[c] / pv;
                if f != 0 {
                    axpy(&ring, row, ring.neg(f), &piv);
                }
            }
        }
        Howell { ring, dim, rows }
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, _, r)| r)
    }

    pub fn generators(&self) -> Vec<Vector> {
        self.rows().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// log_p of the number of elements in the span.
    pub fn log_order(&self) -> u32 {
        self.rows.iter().map(|(_, v, _)| self.ring.a - v).sum()
    }

    /// Reduce `x` against the basis; the result is zero iff `x` lies in the span.
    pub fn reduce(&self, x: &[u64]) -> Vector {
        let mut x: Vector = x.iter().map(|&t| t % self.ring.q).collect();
        for (c, v, row) in &self.rows {
            let pv = self.ring.pow_p(*v);
            let f = x[*c] / pv;
            if f != 0 {
                axpy(&self.ring, &mut x, self.ring.neg(f), row);
            }
        }
        x
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.reduce(x).iter().all(|&t| t == 0)
    }

    pub fn contains_module(&self, other: &Howell) -> bool {
        other.rows().all(|r| self.contains(r))
    }

    pub fn join(&self, other: &Howell) -> Howell {
        let mut g = self.generators();
        g.extend(other.generators());
        Howell::span(self.ring, self.dim, g)
    }
}

/// Given generators `gens` of a submodule of R^n with images `images` in R^m,
/// return the submodule of those combinations whose image lies in `target`.
pub fn preimage(
    ring: LocalRing,
    n: usize,
    gens: &[Vector],
    images: &[Vector],
    target: &Howell,
) -> Howell {
    assert_eq!(gens.len(), images.len());
    let m = target.dim;
    let mut rows = Vec::with_capacity(gens.len() + target.rows.len());
    for (g, y) in gens.iter().zip(images) {
        let mut r = y.clone();
        r.extend_from_slice(g);
        rows.push(r);
    }
    for t in target.rows() {
        let mut r = t.clone();
        r.extend(std::iter::repeat_n(0, n));
        rows.push(r);
    }
    let h = Howell::span(ring, m + n, rows);
    let kernel: Vec<Vector> = h
        .rows
        .iter()
        .filter(|(c, _, _)| *c >= m)
        .map(|(_, _, r)| r[m..].to_vec())
        .collect();
    Howell::span(ring, n, kernel)
}
