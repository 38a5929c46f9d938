//! Dense integer matrices: Hermite and Smith normal forms over Z, rational inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZRow = Vec<BigInt>;

/// Row-style Hermite normal form built by inserting one vector at a time.
///
/// The basis is upper triangular with positive pivots, and every entry above a
/// pivot lies in `[0, pivot)`. When a modulus `d` is given, the lattice is
/// assumed to contain `d * Z^n` and intermediate entries are reduced modulo `d`.
#[derive(Clone, Debug)]
pub struct HnfBuilder {
    ncols: usize,
    pivots: Vec<Option<ZRow>>,
    modulus: Option<BigInt>,
}

impl HnfBuilder {
    pub fn new(ncols: usize) -> Self {
        HnfBuilder {
            ncols,
            pivots: vec![None; ncols],
            modulus: None,
        }
    }

    /// Start from `d * I`; all later insertions are reduced modulo `d`.
    pub fn with_modulus(ncols: usize, d: BigInt) -> Self {
        let d = d.abs();
        assert!(!d.is_zero(), "modulus must be nonzero");
        let mut pivots = vec![None; ncols];
        for (c, slot) in pivots.iter_mut().enumerate() {
            let mut row = vec![BigInt::zero(); ncols];
            row[c] = d.clone();
            *slot = Some(row);
        }
        HnfBuilder {
            ncols,
            pivots,
            modulus: Some(d),
        }
    }

    fn reduce_mod(&self, v: &mut ZRow, from: usize) {
        if let Some(d) = &self.modulus {
            for x in v.iter_mut().skip(from) {
                *x = x.mod_floor(d);
            }
        }
    }

    pub fn insert(&mut self, mut v: ZRow) {
        assert_eq!(v.len(), self.ncols);
        self.reduce_mod(&mut v, 0);
        for c in 0..self.ncols {
            if v[c].is_zero() {
                continue;
            }
            match self.pivots[c].take() {
                None => {
                    if v[c].is_negative() {
                        for x in v.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    self.pivots[c] = Some(v);
                    return;
                }
                Some(mut h) => {
                    if (&v[c] % &h[c]).is_zero() {
                        let q = &v[c] / &h[c];
                        for j in c..self.ncols {
                            let t = &q * &h[j];
                            v[j] -= t;
                        }
                    } else {
                        let ext = h[c].extended_gcd(&v[c]);
                        let (g, x, y) = (ext.gcd, ext.x, ext.y);
                        let a = &h[c] / &g;
                        let b = &v[c] / &g;
                        let mut nh = vec![BigInt::zero(); self.ncols];
                        let mut nv = vec![BigInt::zero(); self.ncols];
                        for j in c..self.ncols {
                            nh[j] = &x * &h[j] + &y * &v[j];
                            nv[j] = &a * &v[j] - &b * &h[j];
                        }
                        if nh[c].is_negative() {
                            for t in nh.iter_mut() {
                                *t = -&*t;
                            }
                        }
                        h = nh;
                        v = nv;
                    }
                    self.reduce_mod(&mut h, c + 1);
                    self.reduce_mod(&mut v, c + 1);
                    self.pivots[c] = Some(h);
                }
            }
        }
    }

    /// Canonical HNF rows (zero rows omitted), ordered by pivot column.
    pub fn finish(self) -> Vec<ZRow> {
        let ncols = self.ncols;
        let mut rows: Vec<(usize, ZRow)> = self
            .pivots
            .into_iter()
            .enumerate()
            .filter_map(|(c, r)| r.map(|r| (c, r)))
            .collect();
        for k in 0..rows.len() {
            let (c, piv) = (rows[k].0, rows[k].1.clone());
            for (_, row) in rows.iter_mut().take(k) {
                let q = row[c].div_floor(&piv[c]);
                if !q.is_zero() {
                    for j in c..ncols {
                        let t = &q * &piv[j];
                        row[j] -= t;
                    }
                }
            }
        }
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// HNF of the lattice spanned by `rows`.
pub fn hnf(rows: impl IntoIterator<Item = ZRow>, ncols: usize) -> Vec<ZRow> {
    let mut b = HnfBuilder::new(ncols);
    for r in rows {
        b.insert(r);
    }
    b.finish()
}

/// Determinant of a square integer matrix via fraction-free elimination.
pub fn det(m: &[ZRow]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<ZRow> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a square rational matrix, or None if singular.
pub fn inverse_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[i][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Result of a Smith normal form computation `U * A * V = D`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Nonzero diagonal entries d_1 | d_2 | ... (positive).
    pub diagonal: Vec<BigInt>,
    pub u: Vec<ZRow>,
    pub v: Vec<ZRow>,
    pub v_inv: Vec<ZRow>,
}

fn identity(n: usize) -> Vec<ZRow> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form with transforms for an `m x n` matrix.
pub fn smith(a: &[ZRow], ncols: usize) -> Smith {
    let m = a.len();
    let n = ncols;
    let mut a: Vec<ZRow> = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut v_inv = identity(n);

    // Column operations are mirrored on v (right) and v_inv (left, inverse op).
    let col_swap = |a: &mut Vec<ZRow>, v: &mut Vec<ZRow>, vi: &mut Vec<ZRow>, i: usize, j: usize| {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
        vi.swap(i, j);
    };
    // col_j += k * col_i
    let col_add = |a: &mut Vec<ZRow>,
                   v: &mut Vec<ZRow>,
                   vi: &mut Vec<ZRow>,
                   j: usize,
                   i: usize,
                   k: &BigInt| {
        for r in a.iter_mut() {
            let t = k * &r[i];
            r[j] += t;
        }
        for r in v.iter_mut() {
            let t = k * &r[i];
            r[j] += t;
        }
        // inverse op on rows of vi: row_i -= k * row_j
        let rj = vi[j].clone();
        for (x, y) in vi[i].iter_mut().zip(rj.iter()) {
            *x -= k * y;
        }
    };

    let mut t = 0;
    while t < m.min(n) {
        // pick the smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        u.swap(t, bi);
        if bj != t {
            col_swap(&mut a, &mut v, &mut v_inv, t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (rt, ut) = (a[t].clone(), u[t].clone());
                    for (x, y) in a[i].iter_mut().zip(rt.iter()) {
                        *x -= &q * y;
                    }
                    for (x, y) in u[i].iter_mut().zip(ut.iter()) {
                        *x -= &q * y;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = -a[t][j].div_floor(&a[t][t]);
                    col_add(&mut a, &mut v, &mut v_inv, j, t, &q);
                    if !a[t][j].is_zero() {
                        col_swap(&mut a, &mut v, &mut v_inv, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility condition on the remaining block
            let mut fix = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let (ri, ui) = (a[i].clone(), u[i].clone());
                    for (x, y) in a[t].iter_mut().zip(ri.iter()) {
                        *x += y;
                    }
                    for (x, y) in u[t].iter_mut().zip(ui.iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..t).map(|i| a[i][i].clone()).collect();
    Smith {
        diagonal,
        u,
        v,
        v_inv,
    }
}

pub fn mat_mul(a: &[ZRow], b: &[ZRow], bcols: usize) -> Vec<ZRow> {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}
