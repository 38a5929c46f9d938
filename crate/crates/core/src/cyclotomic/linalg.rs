//! Dense matrices over Q(zeta_n).

use super::CyclotomicElement;

pub type CMat = Vec<Vec<CyclotomicElement>>;

pub fn cmat_identity(n: u64, d: usize) -> CMat {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { CyclotomicElement::one(n) } else { CyclotomicElement::zero(n) })
                .collect()
        })
        .collect()
}

pub fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut acc = CyclotomicElement::zero(row.first().map_or(1, |x| x.conductor()));
                    for t in 0..k {
                        if !row[t].is_zero() && !b[t][j].is_zero() {
                            acc = acc + &row[t] * &b[t][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn cmat_add(a: &CMat, b: &CMat) -> CMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn cmat_scale(a: &CMat, c: &CyclotomicElement) -> CMat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Determinant by Gaussian elimination over the field.
pub fn cmat_det(a: &CMat) -> CyclotomicElement {
    let d = a.len();
    let n = a.iter().flatten().map(|x| x.conductor()).max().unwrap_or(1);
    let mut m: CMat = a.iter().map(|r| r.iter().map(|x| x.embed(n)).collect()).collect();
    let mut det = CyclotomicElement::one(n);
    for c in 0..d {
        let Some(p) = (c..d).find(|&i| !m[i][c].is_zero()) else {
            return CyclotomicElement::zero(n);
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        for i in c + 1..d {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..d {
                let t = &f * &m[c][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let z = CyclotomicElement::zeta(3);
        let one = CyclotomicElement::one(3);
        let a = vec![vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]];
        // 1 - zeta^2
        assert_eq!(cmat_det(&a), &one - &(&z * &z));
        let id = cmat_identity(3, 3);
        assert!(cmat_det(&id).is_one());
        let sing = vec![vec![z.clone(), z.clone()], vec![one.clone(), one]];
        assert!(cmat_det(&sing).is_zero());
    }
}
