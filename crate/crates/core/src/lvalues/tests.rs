use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::arith::int::{gcd_u64, units_mod};
use crate::groups::{catalog_group, realize, FiniteGroup};

fn q(a: i64, b: i64) -> CyclotomicElement {
    CyclotomicElement::from_rational(1, &BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn datum(gp: Vec<usize>, g0: Vec<usize>, frob: usize, norm: u64) -> DecompositionData {
    DecompositionData {
        label: "p".into(),
        decomposition: gp,
        inertia: g0,
        frobenius: frob,
        residue_norm: norm,
    }
}

/// Every Dirichlet character mod f.
fn all_characters(f: u64) -> Vec<DirichletCharacter> {
    let gens = unit_generators(f);
    let mut out = Vec::new();
    let mut idx = vec![0u64; gens.len()];
    loop {
        out.push(DirichletCharacter::new(f, &idx).unwrap());
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
            return out;
        }
    }
}

#[test]
fn unit_generators_generate() {
    for f in 1..200u64 {
        let gens = unit_generators(f);
        let size: u64 = gens.iter().map(|g| g.1).product();
        assert_eq!(size as usize, units_mod(f).len().max(1), "f = {f}");
        // the character table has no repeated units
        let chi = DirichletCharacter::trivial(f);
        for a in 0..f {
            assert_eq!(chi.value(a).is_zero(), gcd_u64(a, f) != 1, "f = {f}, a = {a}");
        }
    }
}

#[test]
fn quadratic_values() {
    let chi3 = DirichletCharacter::quadratic(-3).unwrap();
    assert_eq!(chi3.l_at_0().unwrap(), q(1, 3));
    let chi4 = DirichletCharacter::quadratic(-4).unwrap();
    assert_eq!(chi4.l_at_0().unwrap(), q(1, 2));
    let chi5 = DirichletCharacter::quadratic(5).unwrap();
    assert!(!chi5.is_odd());
    assert!(chi5.l_at_0().unwrap().is_zero());
    assert!(DirichletCharacter::trivial(7).l_at_0().is_err());
    let chi23 = DirichletCharacter::quadratic(-23).unwrap();
    assert_eq!(chi23.l_at_0().unwrap(), q(3, 1));
    assert!(chi23.is_primitive());
}

#[test]
fn conductors_and_imprimitive_values() {
    // chi_{-3} viewed mod 6: the prime 2 contributes 1 - chi(2) = 2
    let vals: Vec<CyclotomicElement> = (0..6)
        .map(|a: u64| {
            if gcd_u64(a, 6) != 1 {
                q(0, 1)
            } else if a % 3 == 1 {
                q(1, 1)
            } else {
                q(-1, 1)
            }
        })
        .collect();
    let chi = DirichletCharacter::from_values(6, &vals).unwrap();
    assert_eq!(chi.conductor(), 3);
    assert!(!chi.is_primitive());
    assert_eq!(chi.primitive(), DirichletCharacter::quadratic(-3).unwrap());
    assert_eq!(chi.l_at_0().unwrap(), q(2, 3));
}

#[test]
fn l_values_are_galois_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for f in 3..=100u64 {
        for chi in all_characters(f) {
            if !chi.is_odd() || !chi.is_primitive() {
                continue;
            }
            let v = chi.l_at_0().unwrap().embed(chi.order());
            let units = units_mod(chi.order());
            for _ in 0..2 {
                let a = units[rng.gen_range(0..units.len())] as i64;
                assert_eq!(chi.galois(a).l_at_0().unwrap(), v.galois(a), "{chi:?}, a = {a}");
            }
        }
    }
}

#[test]
fn euler_factor_examples() {
    let c3 = FiniteGroup::cyclic(3);
    let irr = c3.irreducibles();
    let gen = (1..3).find(|&x| *irr[1].value(x) == CyclotomicElement::zeta(3)).unwrap();
    let unram = datum(vec![0, 1, 2], vec![0], gen, 7);
    assert!(euler_factor_at_0_inverse(&irr[0], &unram).unwrap().is_zero());
    let expect = CyclotomicElement::one(3) - CyclotomicElement::zeta(3);
    assert_eq!(euler_factor_at_0_inverse(&irr[1], &unram).unwrap(), expect);
    assert_eq!(euler_factor_from_matrices(&realize(&irr[1]).unwrap(), &unram), expect);
    let ram = datum(vec![0, 1, 2], vec![0, 1, 2], 0, 7);
    assert!(euler_factor_at_0_inverse(&irr[1], &ram).unwrap().is_one());
    // virtual: (chi1 - chi2) gives (1 - zeta)/(1 - zeta^2)
    let virt = irr[1].sub(&irr[2]);
    let v = euler_factor_at_0_inverse(&virt, &unram).unwrap();
    let expect2 = (CyclotomicElement::one(3) - CyclotomicElement::zeta(3))
        .div(&(CyclotomicElement::one(3) - CyclotomicElement::zeta_pow(3, 2)))
        .unwrap();
    assert_eq!(v, expect2);
}

/// All (G_p, G_0, F) with G_0 normal in G_p and G_p / G_0 cyclic generated by F.
fn decomposition_data(g: &Arc<FiniteGroup>) -> Vec<DecompositionData> {
    let mut out = Vec::new();
    for gp in g.subgroups() {
        for g0 in g.subgroups() {
            if g0.iter().any(|x| gp.binary_search(x).is_err()) {
                continue;
            }
            for &f in gp {
                let d = datum(gp.clone(), g0.clone(), f, 9);
                if d.validate(g).is_ok() {
                    out.push(d);
                    break;
                }
            }
        }
    }
    out
}

#[test]
fn newton_matches_matrices() {
    for name in ["S3", "Q8", "D4", "Dic3", "A4", "C3:C8"] {
        let g = catalog_group(name).unwrap();
        let data = decomposition_data(&g);
        assert!(!data.is_empty());
        for chi in g.irreducibles() {
            let rep = realize(&chi).unwrap();
            for d in &data {
                let a = euler_factor_at_0_inverse(&chi, d).unwrap();
                assert!(a.is_integral(), "{name}");
                assert_eq!(a, euler_factor_from_matrices(&rep, d), "{name} {d:?}");
            }
        }
    }
}

#[test]
fn truncation() {
    let g = FiniteGroup::cyclic(2);
    let sign = g.irreducibles()[1].clone();
    let l = q(1, 3);
    assert_eq!(truncate(&sign, &l, &[]).unwrap(), l);
    let inert = datum(vec![0, 1], vec![0], 1, 4);
    assert_eq!(truncate(&sign, &l, &[inert]).unwrap(), q(2, 3));
    let split = datum(vec![0], vec![0], 0, 7);
    assert!(truncate(&sign, &l, &[split]).unwrap().is_zero());
}

#[test]
fn vanishing_and_cm() {
    let c2 = FiniteGroup::cyclic(2);
    let irr = c2.irreducibles();
    assert_eq!(order_of_vanishing(&irr[0], &[vec![0, 1]]).unwrap(), 0);
    assert_eq!(order_of_vanishing(&irr[1], &[vec![0, 1]]).unwrap(), 0);
    assert_eq!(detect_cm_and_j(&irr[1], &[vec![0, 1]]).unwrap(), Some(1));
    // real quadratic: the sign character vanishes to order 1
    assert_eq!(order_of_vanishing(&irr[1], &[vec![0]]).unwrap(), 1);
    assert_eq!(detect_cm_and_j(&irr[1], &[vec![0]]).unwrap(), None);

    let g = catalog_group("S3xC2").unwrap();
    let j = g.central_involutions()[0];
    let places = vec![vec![0, j]];
    let chi = g
        .irreducibles()
        .into_iter()
        .find(|c| c.degree() == 2 && c.is_faithful())
        .unwrap();
    assert_eq!(order_of_vanishing(&chi, &places).unwrap(), 0);
    assert_eq!(detect_cm_and_j(&chi, &places).unwrap(), Some(j));
    assert!(order_of_vanishing(&chi, &[vec![0, 1, 2, 3]]).is_err());
}

#[test]
fn artin_formalism() {
    let g = catalog_group("S3").unwrap();
    let irr = g.irreducibles();
    let (quot, phi) = irr[1].deflate().unwrap();
    let mut qt = LValueTable::new(&quot.group);
    let idx = phi.table_index().unwrap();
    qt.insert(idx, q(5, 7), Provider::Supplied).unwrap();
    let mut t = LValueTable::new(&g);
    let n = t.apply(&Relation::Inflation { quotient: &quot, table: &qt }).unwrap();
    assert_eq!(n, 1);
    assert_eq!(t.get(1), Some(&q(5, 7)));
    assert_eq!(t.provider(1), Some(Provider::Formalism));

    // zeta_K(0)/zeta_Q(0) = L(chi1) L(chi2)^2
    t.insert(2, q(2, 1), Provider::Supplied).unwrap();
    let rel = Relation::Additive {
        multiplicities: vec![0, 1, 2],
        value: q(20, 7),
    };
    assert_eq!(t.apply(&rel).unwrap(), 0);
    let bad = Relation::Additive {
        multiplicities: vec![0, 1, 2],
        value: q(3, 1),
    };
    assert!(matches!(t.apply(&bad), Err(Error::Inconsistent(_))));
    let mut partial = LValueTable::new(&g);
    partial.insert(2, q(2, 1), Provider::Supplied).unwrap();
    assert_eq!(partial.apply(&rel).unwrap(), 1);
    assert_eq!(partial.get(1), Some(&q(5, 7)));

    let c3 = FiniteGroup::cyclic(3);
    let mut t = LValueTable::new(&c3);
    let zeta = CyclotomicElement::zeta(3);
    t.insert(1, zeta.clone(), Provider::Supplied).unwrap();
    assert_eq!(t.apply(&Relation::Galois).unwrap(), 1);
    assert_eq!(t.get(2), Some(&zeta.conj()));
    assert!(t.is_galois_equivariant());
    let mut bad = LValueTable::new(&c3);
    bad.insert(1, zeta.clone(), Provider::Supplied).unwrap();
    bad.insert(2, zeta.clone(), Provider::Supplied).unwrap();
    assert!(!bad.is_galois_equivariant());
    assert!(matches!(t.merge(&bad), Err(Error::Inconsistent(_))));
}

#[test]
fn table_file_round_trip() {
    let c3 = FiniteGroup::cyclic(3);
    let mut t = LValueTable::new(&c3);
    t.insert(1, CyclotomicElement::zeta(3).scale_int(&BigInt::from(3)), Provider::Bernoulli).unwrap();
    t.insert(0, q(-1, 2), Provider::Supplied).unwrap();
    let json = serde_json::to_string(&t.to_file()).unwrap();
    let back = LValueTable::from_file(&c3, &serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back.get(1), t.get(1));
    assert_eq!(back.provider(0), Some(Provider::Supplied));
    let mut f = t.to_file();
    f.schema_version = 9;
    assert!(matches!(LValueTable::from_file(&c3, &f), Err(Error::Schema(_))));
}

#[test]
fn stickelberger_examples() {
    let c1 = FiniteGroup::cyclic(1);
    let mut t = LValueTable::new(&c1);
    t.insert(0, q(-1, 2), Provider::Supplied).unwrap();
    assert_eq!(stickelberger_element(&t).unwrap().components(), &[q(-1, 2)]);

    let c2 = FiniteGroup::cyclic(2);
    for (d, val) in [(-3, q(1, 3)), (-23, q(3, 1))] {
        let chi = DirichletCharacter::quadratic(d).unwrap();
        let mut t = LValueTable::new(&c2);
        t.insert(0, q(0, 1), Provider::Supplied).unwrap();
        t.insert(1, chi.l_at_0().unwrap(), Provider::Bernoulli).unwrap();
        let theta = stickelberger_element(&t).unwrap();
        assert_eq!(theta.components()[1], val);
    }
    let mut t = LValueTable::new(&catalog_group("S3").unwrap());
    t.insert(0, q(0, 1), Provider::Supplied).unwrap();
    assert!(stickelberger_element(&t).is_err());
}
