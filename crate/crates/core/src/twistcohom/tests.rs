use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cyclotomic::different_generator;
use crate::groups::{catalog_group, FiniteGroup};

fn c2() -> Arc<FiniteGroup> {
    FiniteGroup::cyclic(2)
}

fn sign(g: &Arc<FiniteGroup>) -> Character {
    g.irreducibles().into_iter().find(|c| !c.is_trivial() && c.degree() == 1).unwrap()
}

fn int(k: i64) -> CyclotomicElement {
    CyclotomicElement::from_int(1, k)
}

/// Subgroup of the module generated by `gens`, by closure.
fn span_size(m: &GModule, gens: &[Vec<i64>]) -> usize {
    let zero = vec![0i64; m.rank()];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y: Vec<i64> = x
                .iter()
                .zip(g)
                .zip(m.invariants())
                .map(|((a, b), &d)| (a + b).rem_euclid(d as i64))
                .collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

fn add(m: &GModule, a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter()
        .zip(b)
        .zip(m.invariants())
        .map(|((x, y), &d)| (x + y).rem_euclid(d as i64))
        .collect()
}

fn sub(m: &GModule, a: &[i64], b: &[i64]) -> Vec<i64> {
    add(m, a, &b.iter().map(|x| -x).collect::<Vec<_>>())
}

/// (|ker t|, |coker t|) by enumeration: ker t = ker N / I_G M, coker t = M^G / N M.
fn norm_law_by_enumeration(m: &GModule) -> (u128, u128) {
    let g = m.group();
    let elems = m.elements();
    let norm = |x: &[i64]| {
        (0..g.order()).fold(vec![0i64; m.rank()], |acc, h| add(m, &acc, &m.apply(h, x)))
    };
    let zero = vec![0i64; m.rank()];
    let ker_n = elems.iter().filter(|x| norm(x) == zero).count() as u128;
    let fixed = elems
        .iter()
        .filter(|x| m.generators().iter().all(|&s| m.apply(s, x) == **x))
        .count() as u128;
    let image: HashSet<Vec<i64>> = elems.iter().map(|x| norm(x)).collect();
    let basis: Vec<Vec<i64>> = (0..m.rank()).map(|j| (0..m.rank()).map(|i| i64::from(i == j)).collect()).collect();
    let aug: Vec<Vec<i64>> = m
        .generators()
        .iter()
        .flat_map(|&s| basis.iter().map(move |e| (s, e)))
        .map(|(s, e)| sub(m, &m.apply(s, e), e))
        .collect();
    let ia = span_size(m, &aug) as u128;
    (ker_n / ia, fixed / image.len() as u128)
}

/// |H^1| and |H^2| from normalized bar cochains, by enumeration.
fn bar_orders(m: &GModule) -> (u128, u128) {
    let g = m.group();
    let n = g.order();
    let elems = m.elements();
    let zero = vec![0i64; m.rank()];
    let cochains = |k: usize| -> Vec<Vec<Vec<i64>>> {
        let mut out: Vec<Vec<Vec<i64>>> = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|c| {
                    elems.iter().map(move |e| {
                        let mut c = c.clone();
                        c.push(e.clone());
                        c
                    })
                })
                .collect();
        }
        out
    };
    let others: Vec<usize> = (1..n).collect();
    // 1-cochains on G \ {1}
    let f1 = |c: &[Vec<i64>], x: usize| if x == 0 { zero.clone() } else { c[x - 1].clone() };
    let d1 = |c: &[Vec<i64>], a: usize, b: usize| -> Vec<i64> {
        // (df)(a, b) = a f(b) - f(ab) + f(a)
        add(m, &sub(m, &m.apply(a, &f1(c, b)), &f1(c, g.mul(a, b))), &f1(c, a))
    };
    let c1 = cochains(others.len());
    let z1 = c1
        .iter()
        .filter(|c| (0..n).all(|a| (0..n).all(|b| d1(c, a, b) == zero)))
        .count() as u128;
    let b1: HashSet<Vec<Vec<i64>>> = elems
        .iter()
        .map(|x| others.iter().map(|&a| sub(m, &m.apply(a, x), x)).collect())
        .collect();
    let h1 = z1 / b1.len() as u128;
    let pairs: Vec<(usize, usize)> = others.iter().flat_map(|&a| others.iter().map(move |&b| (a, b))).collect();
    let f2 = |c: &[Vec<i64>], a: usize, b: usize| -> Vec<i64> {
        if a == 0 || b == 0 {
            zero.clone()
        } else {
            c[(a - 1) * (n - 1) + (b - 1)].clone()
        }
    };
    let z2 = cochains(pairs.len())
        .iter()
        .filter(|c| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    (0..n).all(|x| {
                        // a f(b, x) - f(ab, x) + f(a, bx) - f(a, b)
                        let v = add(m, &sub(m, &m.apply(a, &f2(c, b, x)), &f2(c, g.mul(a, b), x)), &sub(m, &f2(c, a, g.mul(b, x)), &f2(c, a, b)));
                        v == zero
                    })
                })
            })
        })
        .count() as u128;
    let b2: HashSet<Vec<Vec<i64>>> = c1.iter().map(|c| pairs.iter().map(|&(a, b)| d1(c, a, b)).collect()).collect();
    (h1, z2 / b2.len() as u128)
}

#[test]
fn trivial_twist_is_identity() {
    let g = catalog_group("S3").unwrap();
    let m = GModule::permutation(&g, 4, &[1]).unwrap();
    let t = TwistedModule::untwisted(&m).unwrap();
    assert_eq!(t.module(), &m);
    let nm = t.norm_map();
    assert_eq!(nm.source.order(), t.coinvariants().order());
    let trivial = FiniteGroup::cyclic(1);
    let m1 = GModule::trivial(&trivial, vec![3, 9]).unwrap();
    let t1 = TwistedModule::untwisted(&m1).unwrap();
    let nm1 = t1.norm_map();
    assert!(nm1.is_bijective());
    assert_eq!(nm1.source.invariant_factors(), vec![3, 9]);
    assert_eq!(nm1.target.invariant_factors(), vec![3, 9]);
}

#[test]
fn sign_twist_of_z3() {
    let g = c2();
    let m = GModule::cyclic(&g, 3, &[1], &[-1]).unwrap();
    let chi = sign(&g);
    let t = build_twist(&chi, &m, None).unwrap();
    assert_eq!(t.module().action(1), &vec![vec![1]]);
    assert_eq!(t.cohomology(0).unwrap().invariant_factors(), vec![3]);
    assert!(t.cohomology(1).unwrap().is_trivial());
    assert!(t.cohomology(2).unwrap().is_trivial());
    let nm = t.norm_map();
    assert!(nm.is_bijective());
    // the norm 1 + sigma acts as 2 on the trivial module Z/3
    assert_eq!(t.norm_matrix(), vec![vec![2]]);
    let h = h_mu_chi(&m, &chi, None).unwrap();
    assert_eq!(h.ideal, CycloIdeal::from_integer(h.conductor, 3));
    assert_eq!(h.orders, [3, 1, 1]);
    assert!(h.cohomologically_trivial);

    let x = annihilator_transfer(&int(3), &chi, &m, None).unwrap();
    assert_eq!(x, GroupRingElement::from_ints(&g, &[3, -3]).unwrap());
    let err = annihilator_transfer(&int(1), &chi, &m, None).unwrap_err();
    assert!(matches!(err, Error::Precondition(ref s) if s.contains("witness")), "{err}");
    assert_eq!(t.annihilation_witness(&int(1)).unwrap(), Some(vec![1]));
    assert_eq!(t.annihilation_witness(&int(3)).unwrap(), None);
}

#[test]
fn minus_one_on_z4() {
    let g = c2();
    let m = GModule::cyclic(&g, 4, &[1], &[-1]).unwrap();
    let t = TwistedModule::untwisted(&m).unwrap();
    assert_eq!(t.cohomology(1).unwrap().order(), 2);
    assert_eq!(t.cohomology(2).unwrap().order(), 2);
    assert_eq!(t.cohomology(0).unwrap().order(), 2);
    assert_eq!(bar_orders(&m), (2, 2));
}

#[test]
fn s3_degree_two_on_z7() {
    let g = catalog_group("S3").unwrap();
    let chi = g.irreducibles().into_iter().find(|c| c.degree() == 2).unwrap();
    let m = GModule::trivial(&g, vec![7]).unwrap();
    let t = build_twist(&chi, &m, None).unwrap();
    assert_eq!(t.module().order(), 7u128.pow(2 * t.rep().dim as u32));
    assert_eq!(t.module().rank(), 2 * tables(t.conductor()).degree);
    for i in 0..3 {
        assert!(t.cohomology(i).unwrap().is_trivial(), "H^{i}");
    }
    let h = h_mu_chi(&m, &chi, None).unwrap();
    assert!(h.ideal.is_unit());
    // sigma acts through the transpose-inverse of rho: its trace is chi(sigma^-1) [E:Q]
    let s = (0..g.order()).find(|&x| g.elem_order(x) == 2).unwrap();
    let a = t.module().action(s);
    let tr: i64 = (0..a.len()).map(|i| a[i][i]).sum();
    assert_eq!(tr.rem_euclid(7), 0);
}

#[test]
fn trivial_action_h1_is_hom() {
    // H^1 with trivial action is Hom(G^ab, M)
    for (name, n, expect) in [("C3", 3, 3u128), ("S3", 2, 2), ("S3", 3, 1), ("Q8", 2, 4), ("C2xC2", 2, 4)] {
        let g = catalog_group(name).unwrap();
        let m = GModule::trivial(&g, vec![n]).unwrap();
        let t = TwistedModule::untwisted(&m).unwrap();
        assert_eq!(t.cohomology(1).unwrap().order(), expect, "{name} Z/{n}");
    }
}

#[test]
fn bar_resolution_cross_check() {
    let cases: Vec<GModule> = vec![
        GModule::trivial(&FiniteGroup::cyclic(3), vec![3]).unwrap(),
        GModule::trivial(&FiniteGroup::cyclic(2), vec![2, 2]).unwrap(),
        GModule::cyclic(&FiniteGroup::cyclic(2), 3, &[1], &[-1]).unwrap(),
        GModule::cyclic(&FiniteGroup::cyclic(2), 5, &[1], &[-1]).unwrap(),
        GModule::cyclic(&FiniteGroup::cyclic(4), 3, &[1], &[-1]).unwrap(),
        GModule::trivial(&FiniteGroup::cyclic(4), vec![2]).unwrap(),
        GModule::trivial(&catalog_group("C2xC2").unwrap(), vec![2]).unwrap(),
        GModule::regular(&FiniteGroup::cyclic(2), 2).unwrap(),
    ];
    for m in &cases {
        let t = TwistedModule::untwisted(m).unwrap();
        let engine = (t.cohomology(1).unwrap().order(), t.cohomology(2).unwrap().order());
        assert_eq!(engine, bar_orders(m), "{} {:?}", m.group().name(), m.invariants());
    }
}

#[test]
fn free_modules_are_cohomologically_trivial() {
    for (name, n) in [("C2", 5), ("S3", 2), ("C3", 4)] {
        let g = catalog_group(name).unwrap();
        let m = GModule::regular(&g, n).unwrap();
        for chi in g.irreducibles() {
            let t = build_twist(&chi, &m, None).unwrap();
            assert!(t.is_cohomologically_trivial(), "{name}");
            assert!(t.norm_map().is_bijective(), "{name}");
            assert!(t.cohomology(1).unwrap().is_trivial());
        }
        let t = TwistedModule::untwisted(&m).unwrap();
        assert_eq!(norm_law_by_enumeration(t.module()), (1, 1));
    }
    let g = c2();
    let m = GModule::trivial(&g, vec![2]).unwrap();
    assert!(!TwistedModule::untwisted(&m).unwrap().is_cohomologically_trivial());
}

#[test]
fn trivial_group_euler_characteristic() {
    let g = FiniteGroup::cyclic(1);
    let mu = GModule::trivial(&g, vec![12]).unwrap();
    let h = h_mu_chi(&mu, &g.trivial_character(), None).unwrap();
    assert_eq!(h.ideal, CycloIdeal::from_integer(1, 12));
    let two = GModule::trivial(&g, vec![2, 2]).unwrap();
    assert!(h_mu_chi(&two, &g.trivial_character(), None).is_err());
}

#[test]
fn euler_characteristic_over_cyclotomic_ring() {
    // C3 acting on mu_7 by 2; the faithful characters of C3 have values in Q(zeta_3),
    // and 7 splits there, so exactly one prime above 7 sees invariants.
    let g = FiniteGroup::cyclic(3);
    let mu = GModule::cyclic(&g, 7, &[1], &[2]).unwrap();
    let mut seen = 0;
    for chi in g.irreducibles().into_iter().filter(|c| !c.is_trivial()) {
        let h = h_mu_chi(&mu, &chi, None).unwrap();
        assert_eq!(h.orders, [7, 1, 1]);
        assert_eq!(h.ideal.norm(), num_rational::BigRational::from_integer(7.into()));
        seen += 1;
        assert!(h.ideal.is_coprime_to(3).unwrap());
    }
    assert_eq!(seen, 2);
    // the two characters pick out the two different primes above 7
    let irr: Vec<_> = g.irreducibles().into_iter().filter(|c| !c.is_trivial()).collect();
    let a = h_mu_chi(&mu, &irr[0], None).unwrap().ideal;
    let b = h_mu_chi(&mu, &irr[1], None).unwrap().ideal.embed(a.conductor());
    assert_ne!(a, b.embed(a.conductor()));
    assert_eq!(a.mul(&b), CycloIdeal::from_integer(a.conductor(), 7));
}

#[test]
fn twist_is_exact_on_extensions() {
    // 0 -> Z/3 -> Z/9 -> Z/3 -> 0 with C2 acting by -1, twisted by the sign character
    let g = c2();
    let a = GModule::cyclic(&g, 3, &[1], &[-1]).unwrap();
    let b = GModule::cyclic(&g, 9, &[1], &[-1]).unwrap();
    let chi = sign(&g);
    let (ta, tb) = (build_twist(&chi, &a, None).unwrap(), build_twist(&chi, &b, None).unwrap());
    let tc = ta.clone();
    let f = ta.twist_map(&tb, &vec![vec![3]]).unwrap();
    let h = tb.twist_map(&tc, &vec![vec![1]]).unwrap();
    check_exact(ta.module(), tb.module(), tc.module(), &f, &h);
    assert!(ta.twist_map(&tb, &vec![vec![1]]).is_err());
}

fn check_exact(a: &GModule, b: &GModule, c: &GModule, f: &IMat, h: &IMat) {
    let app = |m: &GModule, x: &IMat, v: &[i64]| -> Vec<i64> {
        (0..x.len())
            .map(|i| {
                let s: i64 = x[i].iter().zip(v).map(|(p, q)| p * q).sum();
                s.rem_euclid(m.invariants()[i] as i64)
            })
            .collect()
    };
    let fa: HashSet<Vec<i64>> = a.elements().iter().map(|v| app(b, f, v)).collect();
    assert_eq!(fa.len() as u128, a.order(), "injective");
    let zero = vec![0i64; c.rank()];
    let ker: HashSet<Vec<i64>> = b.elements().into_iter().filter(|v| app(c, h, v) == zero).collect();
    assert_eq!(fa, ker, "exact in the middle");
    let hb: HashSet<Vec<i64>> = b.elements().iter().map(|v| app(c, h, v)).collect();
    assert_eq!(hb.len() as u128, c.order(), "surjective");
}

#[test]
fn random_extensions_stay_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let name = ["C2", "C3", "C4", "S3", "C2xC2"][rng.gen_range(0..5)];
        let g = catalog_group(name).unwrap();
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let Some(big) = random_cyclic(&mut rng, &g, p * p) else { continue };
        let u: Vec<i64> = big.generators().iter().map(|&s| big.action(s)[0][0]).collect();
        let small = GModule::cyclic(&g, p, big.generators(), &u).unwrap();
        let irr = g.irreducibles();
        let chi = &irr[rng.gen_range(0..irr.len())];
        let Ok(ts) = build_twist(chi, &small, None) else { continue };
        let tb = build_twist(chi, &big, None).unwrap();
        let f = ts.twist_map(&tb, &vec![vec![p as i64]]).unwrap();
        let h = tb.twist_map(&ts, &vec![vec![1]]).unwrap();
        if tb.module().order() <= 20_000 {
            check_exact(ts.module(), tb.module(), ts.module(), &f, &h);
        }
    }
}

/// Z/n with a random action of G by units, when one is found.
fn random_cyclic(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>, n: u64) -> Option<GModule> {
    let gens = g.generators();
    for _ in 0..50 {
        let units: Vec<i64> = gens
            .iter()
            .map(|_| loop {
                let u = rng.gen_range(1..n.max(2)) as i64;
                if crate::arith::int::gcd_u64(u as u64, n) == 1 {
                    break u;
                }
            })
            .collect();
        if let Ok(m) = GModule::cyclic(g, n, &gens, &units) {
            return Some(m);
        }
    }
    None
}

#[test]
fn norm_law_on_random_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 40 {
        let name = ["C2", "C3", "C4", "S3", "C2xC2", "C6"][rng.gen_range(0..6)];
        let g = catalog_group(name).unwrap();
        let n = rng.gen_range(2..10);
        let Some(m) = random_cyclic(&mut rng, &g, n) else { continue };
        let m = if rng.gen_bool(0.3) { m.direct_sum(&GModule::trivial(&g, vec![2]).unwrap()).unwrap() } else { m };
        let irr = g.irreducibles();
        let chi = &irr[rng.gen_range(0..irr.len())];
        let Ok(t) = build_twist(chi, &m, None) else { continue };
        if t.module().order() > 5000 {
            continue;
        }
        let nm = t.norm_map();
        assert_eq!(
            (nm.kernel.order(), nm.cokernel.order()),
            norm_law_by_enumeration(t.module()),
            "{name} {:?}",
            m.invariants()
        );
        assert_eq!(nm.kernel.order(), t.tate(-1).unwrap().order());
        checked += 1;
    }
}

#[test]
fn transfer_lemma_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut passed = 0;
    for _ in 0..60 {
        let name = ["C2", "C3", "C4", "S3", "C6", "Q8", "D4"][rng.gen_range(0..7)];
        let g = catalog_group(name).unwrap();
        let n = rng.gen_range(2..14);
        let Some(m) = random_cyclic(&mut rng, &g, n) else { continue };
        let irr = g.irreducibles();
        let chi = &irr[rng.gen_range(0..irr.len())];
        let Ok(rep) = realize(chi) else { continue };
        let k = rep.conductor;
        let x = CyclotomicElement::from_exponents(k, &[(0, rng.gen_range(-4..5) * n as i64 / rng.gen_range(1..3)), (1, rng.gen_range(-2..3))]);
        let t = build_twist(chi, &m, Some(&rep)).unwrap();
        if t.annihilation_witness(&x).unwrap().is_some() {
            assert!(matches!(annihilator_transfer(&x, chi, &m, Some(&rep)), Err(Error::Precondition(_))));
            continue;
        }
        let a = annihilator_transfer(&x, chi, &m, Some(&rep)).unwrap();
        assert!(annihilation_failure(&a, &m, k).unwrap().is_none());
        let y = different_generator(k).inv().unwrap();
        let z = trace_descent(&x, &y, chi, &m, Some(&rep)).unwrap();
        assert!(z.coeffs().iter().all(|c| c.to_integer().is_some()));
        passed += 1;
    }
    assert!(passed > 10, "only {passed} admissible trials");
}

#[test]
fn transfer_with_module_order() {
    let g = catalog_group("S3").unwrap();
    let m = GModule::permutation(&g, 5, &[1]).unwrap();
    for chi in g.irreducibles() {
        let a = annihilator_transfer(&int(5), &chi, &m, None).unwrap();
        assert_eq!(a, projector(&chi).scale(&int(5)));
    }
}

#[test]
fn trace_descent_examples() {
    // E = Q: the element is y x pr_chi
    let g = c2();
    let m = GModule::cyclic(&g, 3, &[1], &[-1]).unwrap();
    let chi = sign(&g);
    let z = trace_descent(&int(3), &int(2), &chi, &m, None).unwrap();
    assert_eq!(z, GroupRingElement::from_ints(&g, &[6, -6]).unwrap());
    let zero = trace_descent(&int(0), &int(1), &chi, &m, None).unwrap();
    assert!(zero.is_zero());
    // E = Q(zeta_3) on Z/3 with trivial C3-action
    let g = FiniteGroup::cyclic(3);
    let m = GModule::trivial(&g, vec![3]).unwrap();
    let chi = g.irreducibles().into_iter().find(|c| !c.is_trivial()).unwrap();
    let y = different_generator(3).inv().unwrap();
    let z = trace_descent(&CyclotomicElement::from_int(3, 3), &y, &chi, &m, None).unwrap();
    assert!(z.coeffs().iter().all(|c| c.to_integer().is_some()));
    assert!(!z.is_zero());
    assert!(annihilation_failure(&z, &m, 1).unwrap().is_none());
    let half = CyclotomicElement::from_rational(3, &num_rational::BigRational::new(1.into(), 2.into()));
    assert!(matches!(
        trace_descent(&CyclotomicElement::from_int(3, 3), &half, &chi, &m, None),
        Err(Error::Invalid(_))
    ));
}

#[test]
fn module_file_round_trip() {
    let g = catalog_group("S3").unwrap();
    let m = GModule::permutation(&g, 6, &[1]).unwrap();
    let f = m.to_file();
    let json = serde_json::to_string(&f).unwrap();
    let back: GModuleFile = serde_json::from_str(&json).unwrap();
    assert_eq!(GModule::from_file(&g, &back).unwrap(), m);
    let mut bad = f.clone();
    let key = *bad.action.keys().next().unwrap();
    bad.action.get_mut(&key).unwrap()[0][0] = 5;
    assert!(GModule::from_file(&g, &bad).is_err());
    bad = f;
    bad.schema_version = 99;
    assert!(matches!(GModule::from_file(&g, &bad), Err(Error::Schema(_))));
}

#[test]
fn elementary_divisors_and_invariant_factors() {
    let g = FiniteGroup::cyclic(1);
    let m = GModule::trivial(&g, vec![4, 6, 9]).unwrap();
    let t = TwistedModule::untwisted(&m).unwrap();
    let h0 = t.cohomology(0).unwrap();
    assert_eq!(h0.elementary_divisors(), vec![2, 3, 4, 9]);
    assert_eq!(h0.invariant_factors(), vec![6, 36]);
    assert_eq!(h0.order(), 216);
}
