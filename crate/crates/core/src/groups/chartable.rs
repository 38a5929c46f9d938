//! Dixon-Schneider: common eigenvectors of the class-sum matrices over F_p,
//! lifted to Q(zeta_e) through eigenvalue multiplicities.

use std::cmp::Ordering;

use super::group::FiniteGroup;
use crate::arith::int::{inv_mod, is_prime, mul_mod, pow_mod, primitive_root};
use crate::cyclotomic::CyclotomicElement;

/// Smallest prime p = 1 mod e with p > bound.
fn splitting_prime(e: u64, bound: u64) -> u64 {
    let mut p = (bound / e + 1) * e + 1;
    while !is_prime(p) {
        p += e;
    }
    p
}

/// Kernel of an m x m matrix over F_p, as a basis of row vectors.
fn kernel_fp(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let m = a.len();
    let k = a.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<u64>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..k {
        let Some(pr) = (row..m).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(pr, row);
        let iv = inv_mod(a[row][c], p).unwrap();
        for x in a[row].iter_mut() {
            *x = mul_mod(*x, iv, p);
        }
        for i in 0..m {
            if i != row && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..k {
                    a[i][j] = (a[i][j] + p - mul_mod(f, a[row][j], p)) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; k];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][fc]) % p;
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in the span of the (row) basis `b`.
fn coords(b: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    // solve sum_i x_i b_i = v
    let m = b.len();
    let k = v.len();
    let mut aug: Vec<Vec<u64>> = (0..k)
        .map(|j| {
            let mut r: Vec<u64> = (0..m).map(|i| b[i][j]).collect();
            r.push(v[j]);
            r
        })
        .collect();
    let mut row = 0;
    let mut piv = Vec::new();
    for c in 0..m {
        let Some(pr) = (row..k).find(|&i| aug[i][c] != 0) else {
            continue;
        };
        aug.swap(pr, row);
        let iv = inv_mod(aug[row][c], p).unwrap();
        for x in aug[row].iter_mut() {
            *x = mul_mod(*x, iv, p);
        }
        for i in 0..k {
            if i != row && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in 0..=m {
                    aug[i][j] = (aug[i][j] + p - mul_mod(f, aug[row][j], p)) % p;
                }
            }
        }
        piv.push(c);
        row += 1;
    }
    let mut x = vec![0u64; m];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][m];
    }
    x
}

pub(crate) fn compute(g: &FiniteGroup) -> Vec<Vec<CyclotomicElement>> {
    let k = g.num_classes();
    let order = g.order() as u64;
    let e = g.exponent();
    let p = splitting_prime(e, order.max(2));
    let z = pow_mod(primitive_root(p), (p - 1) / e, p);

    // structure constants c[j][r][s] = #{x in C_j : x^-1 g_s in C_r}
    let mut c = vec![vec![vec![0u64; k]; k]; k];
    for (j, cj) in c.iter_mut().enumerate() {
        for s in 0..k {
            let gs = g.class_rep(s);
            for &x in &g.classes()[j] {
                let y = g.mul(g.inv(x), gs);
                cj[g.class_of(y)][s] += 1;
            }
        }
    }

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect()];
    for (j, cj) in c.iter().enumerate().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for sp in spaces {
            if sp.len() == 1 {
                next.push(sp);
                continue;
            }
            // restricted matrix B with A v_i = sum_l B[i][l] v_l
            let images: Vec<Vec<u64>> = sp
                .iter()
                .map(|v| {
                    (0..k)
                        .map(|r| (0..k).fold(0, |acc, s| (acc + mul_mod(cj[r][s] % p, v[s], p)) % p))
                        .collect()
                })
                .collect();
            let bm: Vec<Vec<u64>> = images.iter().map(|w| coords(&sp, w, p)).collect();
            let m = sp.len();
            let mut found = 0;
            for lam in 0..p {
                // row-vector convention: x B = lam x
                let mat: Vec<Vec<u64>> = (0..m)
                    .map(|l| {
                        (0..m)
                            .map(|i| {
                                let d = if i == l { lam } else { 0 };
                                (bm[i][l] + p - d) % p
                            })
                            .collect()
                    })
                    .collect();
                let ker = kernel_fp(&mat, p);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|x| {
                        (0..k)
                            .map(|t| (0..m).fold(0, |acc, i| (acc + mul_mod(x[i], sp[i][t], p)) % p))
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == m {
                    break;
                }
            }
            assert_eq!(found, m, "class-sum matrix not diagonalisable over F_p (j = {j})");
        }
        spaces = next;
    }
    assert_eq!(spaces.len(), k, "failed to split the centre");

    let mut rows = Vec::with_capacity(k);
    for sp in spaces {
        let mut w = sp[0].clone();
        let s0 = inv_mod(w[0], p).expect("identity component nonzero");
        for x in w.iter_mut() {
            *x = mul_mod(*x, s0, p);
        }
        // chi(1)^2 = |G| / sum_j w_j w_j' / |C_j|
        let mut s = 0u64;
        for j in 0..k {
            let jj = g.inverse_class(j);
            let t = mul_mod(mul_mod(w[j], w[jj], p), inv_mod(g.class_size(j) as u64 % p, p).unwrap(), p);
            s = (s + t) % p;
        }
        let d2 = mul_mod(order % p, inv_mod(s, p).expect("nonzero"), p);
        let deg = (1..=order)
            .take_while(|d| d * d <= order)
            .find(|d| d * d % p == d2)
            .expect("degree squared divides |G|");
        let vals_p: Vec<u64> = (0..k)
            .map(|j| {
                mul_mod(
                    mul_mod(w[j], deg % p, p),
                    inv_mod(g.class_size(j) as u64 % p, p).unwrap(),
                    p,
                )
            })
            .collect();
        let row: Vec<CyclotomicElement> = (0..k)
            .map(|j| {
                let o = g.elem_order(g.class_rep(j)) as u64;
                let zo = pow_mod(z, e / o, p);
                let inv_o = inv_mod(o % p, p).unwrap();
                let mut terms = Vec::new();
                for t in 0..o {
                    let mut acc = 0u64;
                    for l in 0..o {
                        let cl = g.power_class(j, l as i64);
                        let zz = pow_mod(zo, (o - (t * l) % o) % o, p);
                        acc = (acc + mul_mod(vals_p[cl], zz, p)) % p;
                    }
                    let mult = mul_mod(acc, inv_o, p);
                    assert!(mult <= deg, "eigenvalue multiplicity failed to lift");
                    if mult > 0 {
                        terms.push(((t * (e / o)) as i64, mult as i64));
                    }
                }
                CyclotomicElement::from_exponents(e, &terms)
            })
            .collect();
        rows.push(row);
    }
    rows.sort_by(|a, b| row_cmp(a, b));
    rows
}

fn elem_cmp(a: &CyclotomicElement, b: &CyclotomicElement) -> Ordering {
    a.coeffs().cmp(&b.coeffs())
}

/// Trivial row first, then by degree, then lexicographically by values.
fn row_cmp(a: &[CyclotomicElement], b: &[CyclotomicElement]) -> Ordering {
    let triv = |r: &[CyclotomicElement]| r.iter().all(|x| *x == r[0]);
    let deg = |r: &[CyclotomicElement]| r[0].to_integer().unwrap();
    triv(b)
        .cmp(&triv(a))
        .then_with(|| deg(a).cmp(&deg(b)))
        .then_with(|| {
            a.iter()
                .zip(b)
                .map(|(x, y)| elem_cmp(x, y))
                .find(|o| !o.is_eq())
                .unwrap_or(Ordering::Equal)
        })
}
