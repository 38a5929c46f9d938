use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cyclotomic::CMat;
use crate::groups::{catalog_group, catalog_names, realize};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn int(k: i64) -> CyclotomicElement {
    CyclotomicElement::from_int(1, k)
}

fn s3() -> Arc<FiniteGroup> {
    FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
}

fn of_order(g: &FiniteGroup, k: usize) -> Vec<usize> {
    (0..g.order()).filter(|&x| g.elem_order(x) == k).collect()
}

fn random_element(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> GroupRingElement {
    let c: Vec<i64> = (0..g.order()).map(|_| rng.gen_range(-3..=3)).collect();
    GroupRingElement::from_ints(g, &c).unwrap()
}

#[test]
fn c2_idempotents_and_projectors() {
    let g = FiniteGroup::cyclic(2);
    let irr = g.irreducibles();
    let e = idempotent(&irr[0]);
    assert_eq!(e, GroupRingElement::from_rationals(&g, &[q(1, 2), q(1, 2)]).unwrap());
    assert_eq!(projector(&irr[1]), GroupRingElement::from_ints(&g, &[1, -1]).unwrap());
}

#[test]
fn s3_idempotent() {
    let g = s3();
    let chi = &g.irreducibles()[2];
    let e = idempotent(chi);
    for x in 0..g.order() {
        let expect = match g.elem_order(x) {
            1 => q(2, 3),
            3 => q(-1, 3),
            _ => q(0, 1),
        };
        assert_eq!(e.coeff(x).to_rational().unwrap(), expect);
    }
    assert_eq!(e.mul(&e), e);
    assert!(e.is_central());
}

#[test]
fn idempotents_partition_unity() {
    let mut names: Vec<&str> = catalog_names().into_iter().collect();
    names.retain(|n| catalog_group(n).unwrap().order() <= 16);
    for name in names {
        let g = catalog_group(name).unwrap();
        let es: Vec<_> = g.irreducibles().iter().map(idempotent).collect();
        let mut sum = GroupRingElement::zero(&g);
        for (i, a) in es.iter().enumerate() {
            assert!(a.is_central(), "{name}");
            sum = sum.add(a);
            for (j, b) in es.iter().enumerate().skip(i) {
                let ab = a.mul(b);
                if i == j {
                    assert_eq!(&ab, a, "{name}: e_{i} not idempotent");
                } else {
                    assert!(ab.is_zero(), "{name}: e_{i} e_{j} != 0");
                }
            }
        }
        assert_eq!(sum, GroupRingElement::one(&g), "{name}");
    }
}

#[test]
fn projector_components() {
    let g = s3();
    for (i, chi) in g.irreducibles().iter().enumerate() {
        let z = CentreElement::from_group_ring(&projector(chi)).unwrap();
        for (j, c) in z.components().iter().enumerate() {
            let expect = if i == j { 6 / chi.degree() } else { 0 };
            assert_eq!(*c, int(expect));
        }
    }
}

#[test]
fn sharp_on_c3() {
    let g = FiniteGroup::cyclic(3);
    let z = CentreElement::new(&g, vec![int(1), int(2), int(3)]).unwrap();
    assert_eq!(z.sharp().components(), &[int(1), int(3), int(2)]);
    assert_eq!(z.sharp().sharp(), z);
    let g = s3();
    let z = CentreElement::new(&g, vec![int(5), int(-1), int(7)]).unwrap();
    assert_eq!(z.sharp(), z);
}

fn random_centre(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> CentreElement {
    let e = g.exponent();
    let comps = (0..g.num_classes())
        .map(|_| {
            let k = rng.gen_range(0..e.max(1)) as i64;
            let mut c = CyclotomicElement::zeta_pow(e, k).scale_int(&BigInt::from(rng.gen_range(1..=4)));
            if rng.gen_bool(0.3) {
                c = c + int(rng.gen_range(-2..=2));
            }
            c
        })
        .collect();
    CentreElement::new(g, comps).unwrap()
}

#[test]
fn sharp_commutes_with_induction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let groups = ["S3", "Q8", "C6", "D4", "A4"].map(|n| catalog_group(n).unwrap());
    for t in 0..100 {
        let g = &groups[t % groups.len()];
        let subs = g.subgroups();
        let h = g.subgroup(&subs[rng.gen_range(0..subs.len())]).unwrap();
        let z = random_centre(&h.group, &mut rng);
        let a = induce_centre(&h, &z.sharp()).unwrap();
        let b = induce_centre(&h, &z).unwrap().sharp();
        assert_eq!(a, b, "{} trial {t}", g.name());
    }
}

#[test]
fn induction_examples() {
    let g = s3();
    let whole = g.subgroup(&(0..6).collect::<Vec<_>>()).unwrap();
    let z = CentreElement::new(&whole.group, vec![int(2), int(3), int(5)]).unwrap();
    assert_eq!(induce_centre(&whole, &z).unwrap().components(), z.components());

    let triv = g.subgroup(&[0]).unwrap();
    let z = CentreElement::new(&triv.group, vec![int(3)]).unwrap();
    let ind = induce_centre(&triv, &z).unwrap();
    assert_eq!(ind.components(), &[int(3), int(3), int(9)]);

    let c3 = g.subgroup(&g.closure(&[of_order(&g, 3)[0]])).unwrap();
    let zeta = CyclotomicElement::zeta(3);
    let z = CentreElement::new(&c3.group, vec![int(0), zeta.clone(), int(7)]).unwrap();
    let ind = induce_centre(&c3, &z).unwrap();
    // the 2-dim character restricts to the two nontrivial characters of C3
    assert_eq!(ind.components()[2], &zeta * &int(7));
    assert!(ind.components()[0].is_zero());
}

/// The permutation action of G on G/H, as integer matrices (columns are images).
fn coset_rep(g: &Arc<FiniteGroup>, h: &[usize]) -> Vec<CMat> {
    let reps = g.coset_reps(h);
    let coset = |x: usize| reps.iter().position(|&r| h.contains(&g.mul(g.inv(r), x))).unwrap();
    (0..g.order())
        .map(|x| {
            let mut m = vec![vec![int(0); reps.len()]; reps.len()];
            for (i, &r) in reps.iter().enumerate() {
                m[coset(g.mul(x, r))][i] = int(1);
            }
            m
        })
        .collect()
}

#[test]
fn reduced_norm_two_realizations() {
    let g = s3();
    let chi = g.irreducibles()[2].clone();
    let one = GroupRingElement::one(&g);
    assert!(reduced_norm(&chi, &one, None).unwrap().is_one());

    // sum-zero sublattice of the action on G/C2, basis p0 - p2, p1 - p2
    let h = g.closure(&[of_order(&g, 2)[0]]);
    let perm = coset_rep(&g, &h);
    let restrict = |m: &CMat| -> CMat {
        let col = |j: usize| -> Vec<CyclotomicElement> { (0..2).map(|i| &m[i][j] - &m[i][2]).collect() };
        let (a, b) = (col(0), col(1));
        vec![vec![a[0].clone(), b[0].clone()], vec![a[1].clone(), b[1].clone()]]
    };
    let gens = g.generators();
    let mats: Vec<CMat> = gens.iter().map(|&x| restrict(&perm[x])).collect();
    let integral = MatrixRep::from_generators(&g, 1, &gens, &mats).unwrap();
    assert!(integral.affords(&chi));
    let monomial = realize(&chi).unwrap();
    assert_eq!(monomial.conductor, 3);

    let s = of_order(&g, 2)[0];
    let c = of_order(&g, 3)[0];
    let x = one.add(&GroupRingElement::basis(&g, s));
    assert!(reduced_norm(&chi, &x, Some(&integral)).unwrap().is_zero());
    let y = GroupRingElement::from_ints(&g, &(0..6).map(|k| k as i64 - 1).collect::<Vec<_>>()).unwrap();
    let y = y.add(&GroupRingElement::basis(&g, c));
    let a = reduced_norm(&chi, &y, Some(&integral)).unwrap();
    let b = reduced_norm(&chi, &y, Some(&monomial)).unwrap();
    assert_eq!(a, b);
    assert!(!a.is_zero());
}

#[test]
fn reduced_norm_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["S3", "Q8", "D4", "Dic3"] {
        let g = catalog_group(name).unwrap();
        for chi in g.irreducibles() {
            let rep = realize(&chi).unwrap();
            for _ in 0..4 {
                let x = random_element(&g, &mut rng);
                let y = random_element(&g, &mut rng);
                let nx = reduced_norm(&chi, &x, Some(&rep)).unwrap();
                let ny = reduced_norm(&chi, &y, Some(&rep)).unwrap();
                let nxy = reduced_norm(&chi, &x.mul(&y), Some(&rep)).unwrap();
                assert_eq!(nxy, nx * ny, "{name}");
            }
        }
    }
}

#[test]
fn reduced_norm_linear_and_central() {
    let g = FiniteGroup::cyclic(4);
    let chi = g.irreducibles().into_iter().find(|c| c.is_faithful()).unwrap();
    let x = GroupRingElement::from_ints(&g, &[1, 2, 0, -1]).unwrap();
    let mut expect = CyclotomicElement::zero(1);
    for (k, c) in x.coeffs().iter().enumerate() {
        expect = expect + c * chi.value(k);
    }
    assert_eq!(reduced_norm(&chi, &x, None).unwrap(), expect);

    let g = s3();
    let chi = g.irreducibles()[2].clone();
    let z = CentreElement::new(&g, vec![int(1), int(1), int(3)]).unwrap().to_group_ring().unwrap();
    assert_eq!(reduced_norm(&chi, &z, None).unwrap(), int(9));
}

fn cyclic_datum(gp: &[usize], g0: &[usize], frob: usize) -> DecompositionData {
    DecompositionData {
        label: "p".into(),
        decomposition: gp.to_vec(),
        inertia: g0.to_vec(),
        frobenius: frob,
        residue_norm: 7,
    }
}

#[test]
fn local_idempotent_identities() {
    let g = FiniteGroup::cyclic(6);
    let all: Vec<usize> = (0..6).collect();
    let c3 = g.closure(&[of_order(&g, 3)[0]]);
    let gen = of_order(&g, 6)[0];
    let d = cyclic_datum(&all, &c3, gen);
    d.validate(&g).unwrap();
    let li = local_idempotents(&g, &d);
    let one = GroupRingElement::one(&g);
    assert_eq!(li.inertia, norm_element(&g, &c3).scale_rational(&q(1, 3)));
    assert_eq!(li.inertia.add(&li.inertia_complement), one);
    assert_eq!(li.decomposition.add(&li.decomposition_complement), one);
    assert_eq!(li.decomposition.mul(&li.inertia), li.decomposition);
    assert!(li.inertia.mul(&li.inertia_complement).is_zero());
    for e in [&li.inertia, &li.inertia_complement, &li.decomposition, &li.decomposition_complement] {
        assert_eq!(&e.mul(e), e);
    }

    let unram = cyclic_datum(&all, &[0], gen);
    let li = local_idempotents(&g, &unram);
    assert_eq!(li.inertia, one);
    assert!(li.inertia_complement.is_zero());

    let full = cyclic_datum(&all, &all, 0);
    let li = local_idempotents(&g, &full);
    assert_eq!(li.inertia, li.decomposition);
}

#[test]
fn decomposition_validation() {
    let g = s3();
    let s = of_order(&g, 2)[0];
    let c2 = g.closure(&[s]);
    let d = cyclic_datum(&c2, &[0], s);
    d.validate(&g).unwrap();
    let bad = cyclic_datum(&c2, &[0], 0);
    assert!(bad.validate(&g).is_err());
    let mut bad = d.clone();
    bad.residue_norm = 6;
    assert!(bad.validate(&g).is_err());
    let all: Vec<usize> = (0..6).collect();
    assert!(cyclic_datum(&all, &c2, of_order(&g, 3)[0]).validate(&g).is_err());
}

#[test]
fn u_p_generators_and_lattices() {
    let g = FiniteGroup::cyclic(6);
    let all: Vec<usize> = (0..6).collect();
    let gen = of_order(&g, 6)[0];

    let unram = cyclic_datum(&all, &[0], gen);
    let [u1, u2] = u_p_generators(&g, &unram);
    assert_eq!(u1, GroupRingElement::one(&g));
    assert_eq!(u2, GroupRingElement::one(&g).sub(&GroupRingElement::basis(&g, g.inv(gen))));
    let lat = u_p_lattice(&g, &unram).unwrap();
    let identity: Vec<Vec<BigInt>> = (0..6)
        .map(|i| (0..6).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    assert_eq!(lat, RationalLattice { den: BigInt::from(1), rows: identity });

    let c3 = g.closure(&[of_order(&g, 3)[0]]);
    let d = cyclic_datum(&all, &c3, gen);
    assert_eq!(u_p_lattice(&g, &d).unwrap().rank(), 6);

    let c2 = FiniteGroup::cyclic(2);
    let d = cyclic_datum(&[0, 1], &[0, 1], 0);
    let [u1, u2] = u_p_generators(&c2, &d);
    assert_eq!(u1, GroupRingElement::from_ints(&c2, &[1, 1]).unwrap());
    assert_eq!(u2, GroupRingElement::from_rationals(&c2, &[q(1, 2), q(-1, 2)]).unwrap());

    // unramified inside a larger group: Z[G_p] in the G_p coordinates
    let s = s3();
    let t = of_order(&s, 2)[0];
    let sub = s.closure(&[t]);
    let d = cyclic_datum(&sub, &[0], t);
    let lat = u_p_lattice(&s, &d).unwrap();
    assert_eq!(lat.rank(), 2);
    assert_eq!(lat.den, BigInt::from(1));
}

#[test]
fn u_chi_cases() {
    let g = s3();
    let chi = g.irreducibles()[2].clone();
    let rep = realize(&chi).unwrap();
    let s = of_order(&g, 2)[0];
    let c2 = g.closure(&[s]);

    let unram = cyclic_datum(&c2, &[0], s);
    let (ideal, flag) = u_chi(&chi, &[unram], &rep).unwrap();
    assert!(ideal.is_unit());
    assert_eq!(flag, Exactness::Exact);

    let ram = cyclic_datum(&c2, &c2, 0);
    let (ideal, flag) = u_chi(&chi, &[ram], &rep).unwrap();
    assert_eq!(flag, Exactness::LowerBound);
    assert!(ideal.is_integral());
    assert!(!ideal.is_zero());

    let a3 = g.closure(&[of_order(&g, 3)[0]]);
    let normal = cyclic_datum(&a3, &a3, 0);
    let (ideal, flag) = u_chi(&chi, &[normal], &rep).unwrap();
    assert!(ideal.is_unit());
    assert_eq!(flag, Exactness::Exact);

    let c4 = FiniteGroup::cyclic(4);
    let phi = c4.irreducibles().into_iter().find(|c| c.is_faithful()).unwrap();
    let all: Vec<usize> = (0..4).collect();
    let d = cyclic_datum(&all, &all, 0);
    let (ideal, flag) = u_chi(&phi, &[d], &realize(&phi).unwrap()).unwrap();
    assert!(ideal.is_unit());
    assert_eq!(flag, Exactness::Exact);

    assert!(u_chi(&g.irreducibles()[1], &[], &rep).is_err());
}

#[test]
fn to_group_ring_examples() {
    let g = FiniteGroup::cyclic(2);
    assert_eq!(CentreElement::one(&g).to_group_ring().unwrap(), GroupRingElement::one(&g));
    let z = CentreElement::new(&g, vec![int(0), int(3)]).unwrap();
    let x = z.to_group_ring().unwrap();
    assert_eq!(x, GroupRingElement::from_rationals(&g, &[q(3, 2), q(-3, 2)]).unwrap());
    assert!(x.is_p_integral(3).unwrap());
    assert!(!x.is_p_integral(2).unwrap());

    let c3 = FiniteGroup::cyclic(3);
    let z = CentreElement::new(&c3, vec![int(0), int(1), int(0)]).unwrap();
    assert!(matches!(z.to_group_ring(), Err(Error::NotRational(_))));
    assert!(!z.is_galois_stable());
}

#[test]
fn galois_orbit_sum_is_a_trace() {
    // sum over the orbit of x pr_chi, with x = 2 + zeta_5
    let g = FiniteGroup::cyclic(5);
    let chi = g.irreducibles()[1].clone();
    let x = int(2) + CyclotomicElement::zeta(5);
    let mut by_ring = GroupRingElement::zero(&g);
    let mut comps = vec![int(0); 5];
    for (a, c) in chi.galois_orbit() {
        by_ring = by_ring.add(&projector(&chi).scale(&x).galois(a as i64));
        comps[c.table_index().unwrap()] = x.galois(a as i64).scale_int(&BigInt::from(5));
    }
    let z = CentreElement::new(&g, comps).unwrap();
    assert!(z.is_galois_stable());
    let expanded = z.to_group_ring().unwrap();
    assert_eq!(expanded, by_ring);
    for k in 0..5 {
        let tr = (&x * chi.value(g.inv(k))).trace();
        assert_eq!(expanded.coeff(k).to_rational().unwrap(), tr);
        assert!(tr.is_integer());
    }
}
