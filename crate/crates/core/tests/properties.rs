use clf_core::conjugacy::{self, solvable_conjugacy, wreath_conjugacy};
use clf_core::lab::distortion::measure_distortion;
use clf_core::lab::scan::{clf_scan, InstanceSource, MinLength, ScanConfig};
use clf_core::literal::{format_element, parse_element, parse_group};
use clf_core::magnus::SolvableElement;
use clf_core::metric::{self, Caps};
use clf_core::wreath::{wreath_mul, wreath_word_length, WreathElement};
use clf_core::{Element, Group, ReducedWord};
use proptest::prelude::*;

fn lamplighter_element(rank: usize) -> impl Strategy<Value = Element> {
    let point = proptest::collection::vec(-3i64..=3, rank);
    (proptest::collection::vec((point.clone(), 1u64..2), 0..5), point).prop_map(move |(lamps, cursor)| {
        let (top, base) = (Group::Cyclic(2), Group::FreeAbelian(rank));
        let entries = lamps.into_iter().map(|(p, v)| (Element::Vector(p), Element::Residue(v)));
        Element::wreath(WreathElement::from_entries(&top, &base, entries, Element::Vector(cursor)).unwrap())
    })
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = ReducedWord> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    proptest::collection::vec(proptest::sample::select(letters), 0..=max_len)
        .prop_map(move |raw| ReducedWord::reduce(rank, &raw).unwrap())
}

fn solvable(w: &ReducedWord, depth: usize) -> Element {
    Element::solvable(SolvableElement::from_word(w.rank(), depth, w.clone()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wreath_length_is_subadditive(u in lamplighter_element(2), v in lamplighter_element(2)) {
        let caps = Caps::default();
        let (top, base) = (Group::Cyclic(2), Group::FreeAbelian(2));
        let (uw, vw) = (u.as_wreath().unwrap(), v.as_wreath().unwrap());
        let uv = wreath_mul(&top, &base, uw, vw).unwrap();
        let l = |w: &WreathElement| wreath_word_length(&top, &base, w, &caps).unwrap();
        prop_assert!(l(&uv) <= l(uw) + l(vw));
        for at in uv.lamps.keys() {
            let shifted = base.mul(&base.inv(&uw.cursor).unwrap(), at).unwrap();
            prop_assert!(uw.lamps.contains_key(at) || vw.lamps.contains_key(&shifted));
        }
    }

    #[test]
    fn wreath_literals_round_trip(u in lamplighter_element(1)) {
        let g = parse_group("W:Z2~Z").unwrap();
        let text = format_element(&g, &u);
        prop_assert_eq!(parse_element(&g, &text).unwrap(), u);
    }

    #[test]
    fn wreath_conjugacy_certificates_verify(u in lamplighter_element(1), gamma in lamplighter_element(1)) {
        let caps = Caps::default();
        let g = parse_group("W:Z2~Z").unwrap();
        let v = g.mul(&g.mul(&g.inv(&gamma).unwrap(), &u).unwrap(), &gamma).unwrap();
        let cert = wreath_conjugacy(&g, &u, &v, &caps).unwrap().expect("conjugate by construction");
        prop_assert!(cert.verified);
        prop_assert!(conjugacy::verify_conjugator(&g, &u, &v, &cert.conjugator).unwrap());
        prop_assert!(cert.z_length.unwrap() <= cert.n);
    }

    #[test]
    fn normal_form_is_a_homomorphism(a in word(2, 8), b in word(2, 8)) {
        let g = Group::free_solvable(2, 2);
        let prod = solvable(&a.mul(&b), 2);
        prop_assert_eq!(g.mul(&solvable(&a, 2), &solvable(&b, 2)).unwrap(), prod);
    }

    #[test]
    fn solvable_certificates_verify(u in word(2, 3), w in word(2, 3)) {
        let caps = Caps::default();
        let g = Group::free_solvable(2, 2);
        let (ue, we) = (solvable(&u, 2), solvable(&w, 2));
        let v = g.mul(&g.mul(&g.inv(&we).unwrap(), &ue).unwrap(), &we).unwrap();
        let cert = solvable_conjugacy(&g, &ue, &v, &caps).unwrap().expect("conjugate by construction");
        prop_assert!(conjugacy::verify_conjugator(&g, &ue, &v, &Element::solvable(cert.conjugator)).unwrap());
    }

    #[test]
    fn nonzero_exponent_sums_are_nontrivial(w in word(2, 10)) {
        prop_assume!(w.exponent_sums() != vec![0, 0]);
        let g = Group::free_solvable(2, 3);
        prop_assert!(!g.is_identity(&solvable(&w, 3)));
    }
}

#[test]
fn second_derived_subgroup_is_trivial_in_metabelian_quotient() {
    let p = |t: &str| ReducedWord::parse(2, t).unwrap();
    let c = ReducedWord::commutator(&p("x1"), &p("x2"));
    let c_conj = p("x1").mul(&c).mul(&p("X1"));
    let w = ReducedWord::commutator(&c, &c_conj);
    assert!(!w.is_empty());
    assert!(Group::free_solvable(2, 2).is_identity(&solvable(&w, 2)));
    assert!(!Group::free_solvable(2, 3).is_identity(&solvable(&w, 3)));
}

#[test]
fn distortion_is_monotone_and_dominates_powers() {
    let caps = Caps::default();
    let g = Group::free_solvable(2, 2);
    let b = solvable(&ReducedWord::parse(2, "x1 x2").unwrap(), 2);
    let profile = measure_distortion(&g, &b, 5, &caps).unwrap();
    let values: Vec<u64> = profile.samples.iter().map(|s| s.1).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    for m in 1..=3i64 {
        let len = metric::word_length(&g, &g.pow(&b, m).unwrap(), &caps).unwrap();
        if len <= 5 {
            assert!(profile.at(len).unwrap() >= m as u64);
        }
    }
}

#[test]
fn scanned_lengths_respect_bounds() {
    let cfg = ScanConfig {
        group: parse_group("W:Z2~Z").unwrap(),
        source: InstanceSource::RandomPairs { count: 60, max_len: 3, conj_len: 3 },
        seed: 11,
        cap: 9,
        caps: Caps::default(),
    };
    for r in clf_scan(&cfg).unwrap() {
        assert!(!r.violation, "{r:?}");
        if let MinLength::Exact(k) = r.min_conj_len {
            assert!(r.bounds.values().all(|&b| k <= b));
        }
    }
    let solvable_cfg = ScanConfig {
        group: Group::free_solvable(2, 2),
        source: InstanceSource::RandomPairs { count: 10, max_len: 2, conj_len: 1 },
        seed: 3,
        cap: 3,
        caps: Caps::default(),
    };
    assert!(clf_scan(&solvable_cfg).unwrap().iter().all(|r| !r.violation));
}
