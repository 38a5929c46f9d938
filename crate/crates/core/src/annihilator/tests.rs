use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::centre::{DecompositionData, Exactness, GroupRingElement};
use crate::cyclotomic::CyclotomicElement;
use crate::error::Error;
use crate::fixtures::{load_embedded, quadratic_field_datum, quadratic_table, sign_character, Fixture};
use crate::groups::{catalog_group, character_field, Character};
use crate::lvalues::{stickelberger_element, Provider};
use crate::twistcohom::GModule;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn fixture(name: &str) -> Fixture {
    load_embedded().unwrap().into_iter().find(|f| f.name == name).unwrap()
}

fn m23() -> (FieldDatum, crate::lvalues::LValueTable, Character) {
    (quadratic_field_datum(23).unwrap(), quadratic_table(23).unwrap(), sign_character().unwrap())
}

/// G = C6 over a real quadratic k, with a prime above 3 whose decomposition
/// and inertia are {1, j}; splitting and the zeta_p condition are supplied.
fn c6_over_real_quadratic(splitting: Vec<Splitting>, zeta: Truth) -> FieldDatum {
    let g = catalog_group("C6").unwrap();
    let mut p_info = BTreeMap::new();
    p_info.insert(
        3,
        PInfo {
            ramified_in_k_over_q: Some(true),
            splitting,
            zeta_p_condition: zeta,
        },
    );
    let d = FieldDatum {
        name: "C6 over k".into(),
        mu: GModule::cyclic(&g, 2, &[1], &[1]).unwrap(),
        group: g,
        base_is_rationals: false,
        k_totally_real: true,
        cm_j: Some(3),
        places: vec![vec![0, 3], vec![0, 3]],
        ramified_primes: vec![DecompositionData {
            label: "P3".into(),
            decomposition: vec![0, 3],
            inertia: vec![0, 3],
            frobenius: 0,
            residue_norm: 3,
        }],
        base_ramified_primes: vec![],
        p_info,
    };
    d.validate().unwrap();
    d
}

#[test]
fn sqrt_m23_element_is_three_times_one_minus_sigma() {
    let (field, table, chi) = m23();
    let a = build_theorem_element(&chi, &field, 3, &CyclotomicElement::one(1), &table, None).unwrap();
    assert_eq!(a.coefficients(), vec![q(3), q(-3)]);
    assert!(a.provenance.central && a.provenance.p_integral && a.provenance.claim);
    assert_eq!(a.provenance.condition.status, Condition::HoldsTrivially);
    let cl = crate::fixtures::form_class_group(23).unwrap().class_group_data().unwrap();
    let r = verify_annihilation(&a, &cl, 3).unwrap();
    assert!(r.passed());
    assert!(r.witness.is_none());
}

#[test]
fn corrupted_element_fails_with_witness() {
    let (field, table, chi) = m23();
    let mut a = build_theorem_element(&chi, &field, 3, &CyclotomicElement::one(1), &table, None).unwrap();
    a.element = GroupRingElement::from_rationals(&field.group, &[q(1), q(-1)]).unwrap();
    let cl = crate::fixtures::form_class_group(23).unwrap().class_group_data().unwrap();
    let r = verify_annihilation(&a, &cl, 3).unwrap();
    assert_eq!(r.outcome, Outcome::Fail);
    let w = r.witness.unwrap();
    assert_eq!(w.image, vec![2]);
}

#[test]
fn scaled_x_scales_the_element() {
    let (field, table, chi) = m23();
    let three = CyclotomicElement::from_rational(1, &q(3));
    let a = build_theorem_element(&chi, &field, 3, &three, &table, None).unwrap();
    assert_eq!(a.coefficients(), vec![q(9), q(-9)]);
}

#[test]
fn non_admissible_x_is_rejected() {
    let (field, table, chi) = m23();
    let third = CyclotomicElement::from_rational(1, &BigRational::new(1.into(), 3.into()));
    let err = build_theorem_element(&chi, &field, 3, &third, &table, None).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)), "{err}");
}

#[test]
fn even_and_composite_primes_are_rejected() {
    let (field, table, chi) = m23();
    for p in [2, 9, 1] {
        let err = build_theorem_element(&chi, &field, p, &CyclotomicElement::one(1), &table, None).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)), "p = {p}: {err}");
        assert!(condition_star(&field, &chi, p).is_err());
    }
}

#[test]
fn trivial_character_is_rejected() {
    let (field, table, _) = m23();
    let one = field.group.trivial_character();
    let err = build_theorem_element(&one, &field, 3, &CyclotomicElement::one(1), &table, None).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

#[test]
fn condition_for_quadratic_fields() {
    let chi = sign_character().unwrap();
    let f23 = quadratic_field_datum(23).unwrap();
    let v = condition_star(&f23, &chi, 5).unwrap();
    assert_eq!((v.status, v.basis), (Condition::HoldsTrivially, Basis::Unramified));
    // -23 = -q with q = 3 mod 4: zeta condition true, 23 does not split in K/Q
    let v = condition_star(&f23, &chi, 23).unwrap();
    assert_eq!((v.status, v.basis), (Condition::Holds, Basis::Splitting));
    // Q(sqrt(-15)) is not inside Q(zeta_3, sqrt 5)^+ (zeta_3)
    let f15 = quadratic_field_datum(15).unwrap();
    let v = condition_star(&f15, &chi, 3).unwrap();
    assert_eq!((v.status, v.basis), (Condition::HoldsTrivially, Basis::Vacuous));
}

#[test]
fn condition_fails_on_split_prime() {
    let g = catalog_group("C6").unwrap();
    let chi = g.irreducibles()[1].clone();
    assert!(!chi.is_rational());
    let f = c6_over_real_quadratic(vec![Splitting::Split], Truth::True);
    assert_eq!(condition_star(&f, &chi, 3).unwrap().status, Condition::Fails);
    let f = c6_over_real_quadratic(vec![Splitting::Split], Truth::Unknown);
    assert_eq!(condition_star(&f, &chi, 3).unwrap().status, Condition::Unknown);
    let f = c6_over_real_quadratic(vec![Splitting::Nonsplit, Splitting::Nonsplit], Truth::True);
    assert_eq!(condition_star(&f, &chi, 3).unwrap().status, Condition::Holds);
    let f = c6_over_real_quadratic(vec![Splitting::Split], Truth::False);
    assert_eq!(condition_star(&f, &chi, 3).unwrap().basis, Basis::Vacuous);
    // the rational character of order 2 is exempt
    let sign = g.irreducibles()[3].clone();
    let f = c6_over_real_quadratic(vec![Splitting::Split], Truth::True);
    let v = condition_star(&f, &sign, 3).unwrap();
    assert_eq!((v.status, v.basis), (Condition::HoldsTrivially, Basis::RationalCharacter));
}

#[test]
fn failed_condition_withholds_the_claim() {
    let g = catalog_group("C6").unwrap();
    let chi = g.irreducibles()[1].clone();
    let f = c6_over_real_quadratic(vec![Splitting::Split], Truth::True);
    let mut table = crate::lvalues::LValueTable::new(&g);
    // arbitrary Galois-equivariant values; only the bookkeeping is tested here
    for (i, c) in g.irreducibles().iter().enumerate().skip(1) {
        let v = CyclotomicElement::from_rational(1, &q(if c.is_rational() { 2 } else { 1 }));
        table.insert(i, v, Provider::Supplied).unwrap();
    }
    let a = build_theorem_element(&chi, &f, 3, &CyclotomicElement::one(1), &table, None).unwrap();
    assert_eq!(a.provenance.condition.status, Condition::Fails);
    assert!(!a.provenance.claim);
}

#[test]
fn reduction_of_sign_character_of_s3() {
    let fx = fixture("s3_hilbert_m23");
    assert!(!fx.field.is_cm());
    let sign = fx.character("chi1").unwrap();
    let cut = reduce_to_cut_field(&sign, &fx.field).unwrap();
    assert_eq!(cut.quotient.group.order(), 2);
    assert!(!cut.is_identity());
    // the cut field Q(sqrt(-23)) is CM and 23 stays ramified
    assert!(cut.datum.is_cm());
    assert_eq!(cut.datum.ramified_primes.len(), 1);
    assert_eq!(cut.datum.mu.order(), 2);
    let rho = fx.character("chi2").unwrap();
    assert!(reduce_to_cut_field(&rho, &fx.field).unwrap().is_identity());
}

#[test]
fn reduction_from_s3_times_c2() {
    let g = catalog_group("S3xC2").unwrap();
    let z = g.central_involutions()[0];
    let t = (0..g.order()).find(|&x| g.elem_order(x) == 2 && !g.center().contains(&x)).unwrap();
    let field = FieldDatum {
        name: "S3 x C2".into(),
        mu: GModule::cyclic(&g, 2, &g.generators(), &vec![1; g.generators().len()]).unwrap(),
        group: g.clone(),
        base_is_rationals: true,
        k_totally_real: true,
        cm_j: Some(z),
        places: vec![vec![0, z]],
        ramified_primes: vec![DecompositionData {
            label: "7".into(),
            decomposition: g.closure(&[t]),
            inertia: g.closure(&[t]),
            frobenius: 0,
            residue_norm: 7,
        }],
        base_ramified_primes: vec![],
        p_info: BTreeMap::new(),
    };
    field.validate().unwrap();
    for chi in g.irreducibles() {
        let cut = reduce_to_cut_field(&chi, &field).unwrap();
        assert_eq!(cut.quotient.group.order() * chi.kernel().len(), g.order());
        if chi.degree() == 2 && !chi.is_faithful() {
            assert_eq!(cut.quotient.group.order(), 6);
            assert!(!cut.phi.is_linear() && cut.phi.is_faithful());
        }
    }
}

#[test]
fn vanishing_l_value_gives_zero() {
    let fx = fixture("s3_hilbert_m23");
    let a = fx.theorem("chi2", 5, &CyclotomicElement::one(1)).unwrap();
    assert!(a.is_zero());
    assert_eq!(a.provenance.vanishing_order, Some(1));
    // the even characters of Q(zeta_7)
    let fx = fixture("q_zeta7");
    let a = fx.theorem("chi4", 5, &CyclotomicElement::one(1)).unwrap();
    assert!(a.is_zero());
}

#[test]
fn lower_bound_is_reported() {
    let fx = fixture("s3_hilbert_m23");
    assert_eq!(fx.u_chi("chi2").unwrap(), Exactness::LowerBound);
    // the sign character cuts down to C2, where inertia is normal
    let a = fx.theorem("chi1", 3, &CyclotomicElement::one(1)).unwrap();
    assert_eq!(a.provenance.u_chi, Some(Exactness::Exact));
    assert_eq!(a.coefficients(), [3, 3, 3, -3, -3, -3].map(q).to_vec());
}

#[test]
fn corollary_is_order_times_stickelberger_for_abelian_groups() {
    let fx = fixture("q_zeta7");
    let c = fx.corollary(5, &[]).unwrap();
    let mut table = fx.table.clone();
    table
        .insert(0, CyclotomicElement::from_rational(1, &BigRational::new((-1).into(), 2.into())), Provider::Supplied)
        .unwrap();
    let theta = stickelberger_element(&truncated_table(&fx.field, &[], &table).unwrap()).unwrap();
    let expect = theta.expand().scale(&CyclotomicElement::from_rational(1, &q(6)));
    assert_eq!(c.element, expect);
    assert!(c.provenance.warnings.iter().any(|w| w.contains("k = Q")));
}

#[test]
fn corollary_is_a_rescaled_sum_of_theorem_elements() {
    for name in ["q_zeta7", "q_zeta23", "q_sqrt_m23"] {
        let fx = fixture(name);
        let p = 5;
        let cor = fx.corollary(p, &[]).unwrap();
        let g = &fx.field.group;
        let mut seen = vec![false; g.num_classes()];
        let mut acc = GroupRingElement::zero(g);
        for (i, chi) in g.irreducibles().iter().enumerate().skip(1) {
            if seen[i] {
                continue;
            }
            for (_, c) in chi.galois_orbit() {
                seen[c.table_index().unwrap()] = true;
            }
            let a = fx.theorem(&format!("chi{i}"), p, &CyclotomicElement::one(1)).unwrap();
            let m = a.provenance.realization_conductor.unwrap();
            let cf = character_field(chi);
            let e_over_qchi = crate::arith::int::euler_phi(m) / cf.degree;
            let w = BigRational::new(cf.d_chi.into(), e_over_qchi.into());
            acc = acc.add(&a.element.scale(&CyclotomicElement::from_rational(1, &w)));
        }
        assert_eq!(cor.element, acc, "{name}");
    }
}

#[test]
fn corollary_preconditions() {
    let fx = fixture("q_zeta7");
    assert!(matches!(fx.corollary(7, &[]).unwrap_err(), Error::Precondition(_)));
    let fx = fixture("s3_hilbert_m23");
    assert!(matches!(fx.corollary(5, &[]).unwrap_err(), Error::Precondition(_)));
}

#[test]
fn element_file_round_trip() {
    let fx = fixture("q_zeta23");
    for a in [fx.theorem("chi11", 3, &CyclotomicElement::one(1)).unwrap(), fx.corollary(3, &[]).unwrap()] {
        let text = serde_json::to_string_pretty(&a.to_file()).unwrap();
        let back = AnnihilatorElement::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.element, a.element);
        assert_eq!(back.provenance, a.provenance);
    }
}

#[test]
fn tampered_element_file_is_rejected() {
    let (field, table, chi) = m23();
    let a = build_theorem_element(&chi, &field, 3, &CyclotomicElement::one(1), &table, None).unwrap();
    let mut f = a.to_file();
    f.coefficients[0] = "1/3".into();
    assert!(matches!(AnnihilatorElement::from_file(&f).unwrap_err(), Error::Inconsistent(_)));
}

#[test]
fn verification_rejects_p_in_denominator() {
    let (field, table, chi) = m23();
    let mut a = build_theorem_element(&chi, &field, 3, &CyclotomicElement::one(1), &table, None).unwrap();
    a.element = GroupRingElement::from_rationals(&field.group, &[q(1) / q(3), q(0)]).unwrap();
    let cl = crate::fixtures::form_class_group(23).unwrap().class_group_data().unwrap();
    assert!(matches!(verify_annihilation(&a, &cl, 3).unwrap_err(), Error::Precondition(_)));
}

fn splitting() -> impl Strategy<Value = Splitting> {
    prop_oneof![Just(Splitting::Split), Just(Splitting::Nonsplit), Just(Splitting::Unknown)]
}

fn truth() -> impl Strategy<Value = Truth> {
    prop_oneof![Just(Truth::True), Just(Truth::False), Just(Truth::Unknown)]
}

proptest! {
    #[test]
    fn never_holds_with_a_split_prime(s in prop::collection::vec(splitting(), 1..5), z in truth(), i in 1usize..6) {
        let f = c6_over_real_quadratic(s.clone(), z);
        let chi = f.group.irreducibles()[i].clone();
        let v = condition_star(&f, &chi, 3).unwrap();
        if s.contains(&Splitting::Split) {
            prop_assert_ne!(v.status, Condition::Holds);
        }
        if v.status == Condition::Holds {
            prop_assert!(s.iter().all(|x| *x == Splitting::Nonsplit));
        }
    }
}
