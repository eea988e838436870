use gaclass::classify::{type_of_ga, type_of_gl, GroupId};
use gaclass::error::Error;
use gaclass::field::{field_make, Field};
use gaclass::types::{
    canonical_rep_ga, canonical_rep_gl, enumerate_ga_types, enumerate_gl_labels,
    enumerate_gl_types, gl_min_n, hat_type, inflate_type, inflation_min, modify_type, tilde_type,
    Flavor, GAType, GLType,
};
use proptest::prelude::*;

fn f(p: u64) -> Field {
    field_make(p, 1).unwrap()
}

/// Modified GL types of degree at most 4 over F_2 and F_3.
fn small_labels() -> Vec<GLType> {
    let mut out = Vec::new();
    for p in [2, 3] {
        for d in 0..=4 {
            out.extend(enumerate_gl_types(d, &f(p)));
        }
    }
    out
}

fn label() -> impl Strategy<Value = GLType> {
    let all = small_labels();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #[test]
    fn modify_undoes_inflate(t in label(), extra in 0usize..3) {
        let m = inflation_min(&t) + extra;
        let up = inflate_type(&t, m).unwrap();
        prop_assert_eq!(up.degree(), m);
        prop_assert_eq!(modify_type(&up), t.clone());
        prop_assert_eq!(inflate_type(&modify_type(&up), up.degree()).unwrap(), up);
        prop_assert_eq!(gl_min_n(&t), inflation_min(&t));
    }

    #[test]
    fn inflation_below_minimum_fails(t in label()) {
        let min = inflation_min(&t);
        prop_assume!(min > 0);
        prop_assert_eq!(inflate_type(&t, min - 1).unwrap_err(), Error::NotInflatable { target: min - 1, min });
    }

    #[test]
    fn tilde_adds_one_to_the_degree(t in label()) {
        prop_assert_eq!(tilde_type(&t, 0).unwrap().degree(), t.degree() + 1);
        for &k in t.unipotent_part().parts() {
            prop_assert_eq!(tilde_type(&t, k).unwrap().degree(), t.degree() + 1);
        }
        let absent = t.unipotent_part().parts().first().copied().unwrap_or(0) + 1;
        prop_assert!(tilde_type(&t, absent).is_err());
    }

    #[test]
    fn json_round_trip(t in label()) {
        let field = t.field().clone();
        prop_assert_eq!(GLType::from_json(&field, &t.to_json()).unwrap(), t.clone());
        for k in 0..=1 {
            if let Ok(pair) = GAType::modified(t.clone(), k) {
                prop_assert_eq!(GAType::from_json(&field, &pair.to_json()).unwrap(), pair);
            }
        }
    }
}

#[test]
fn hat_degree_equals_pair_degree() {
    for p in [2, 3] {
        for n in 1..=5 {
            for pair in enumerate_ga_types(n, &f(p), Flavor::Modified) {
                assert_eq!(hat_type(&pair).unwrap().degree(), pair.degree());
                assert!(pair.min_n() <= n);
                let plain = pair.plain_at(n).unwrap();
                assert_eq!(plain.to_modified(), pair);
                assert!(pair.plain_at(pair.min_n() - 1).is_err());
            }
        }
    }
}

/// Numbers of conjugacy classes of GL_n(q).
#[test]
fn gl_class_counts() {
    let q2: Vec<usize> = (0..=5)
        .map(|n| enumerate_gl_types(n, &f(2)).len())
        .collect();
    assert_eq!(q2, vec![1, 1, 3, 6, 14, 27]);
    let q3: Vec<usize> = (0..=4)
        .map(|n| enumerate_gl_types(n, &f(3)).len())
        .collect();
    assert_eq!(q3, vec![1, 2, 8, 24, 78]);
    for n in 0..=5 {
        assert_eq!(enumerate_gl_labels(n, &f(2)).len(), q2[n]);
    }
}

#[test]
fn ga_class_count_formula() {
    for p in [2, 3] {
        for n in 1..=5 {
            let formula: usize = (0..n).map(|i| enumerate_gl_types(i, &f(p)).len()).sum();
            assert_eq!(enumerate_ga_types(n, &f(p), Flavor::Plain).len(), formula);
            assert_eq!(
                enumerate_ga_types(n, &f(p), Flavor::Modified).len(),
                formula
            );
        }
    }
}

#[test]
fn representatives_round_trip() {
    for p in [2, 3, 5] {
        let field = f(p);
        for n in 1..=4 {
            for t in enumerate_gl_types(n, &field) {
                let rep = canonical_rep_gl(&t);
                assert_eq!(rep.rows(), n);
                assert_eq!(type_of_gl(&rep).unwrap(), t);
            }
            for pair in enumerate_ga_types(n, &field, Flavor::Plain) {
                let rep = canonical_rep_ga(&pair, n).unwrap();
                assert!(GroupId::ga(n, &field).unwrap().contains(&rep));
                assert_eq!(type_of_ga(&rep, Flavor::Plain).unwrap(), pair);
                assert_eq!(
                    type_of_ga(&rep, Flavor::Modified).unwrap(),
                    pair.to_modified()
                );
            }
        }
    }
}

#[test]
fn shorthand_grammar() {
    let field = f(3);
    let t = GLType::parse_shorthand(&field, "2:t-1,1:t-1,1:t+1").unwrap();
    assert_eq!(t.unipotent_part().parts(), &[2, 1]);
    assert_eq!(t.degree(), 4);
    assert!(GLType::parse_shorthand(&field, "").unwrap().is_empty());
    let pair = GAType::parse_shorthand(&field, ";1").unwrap();
    assert_eq!(pair.k, 1);
    assert!(pair.base.is_empty());
    assert!(GLType::parse_shorthand(&field, "2:t^2").is_err());
    assert!(GLType::parse_shorthand(&field, "x:t-1").is_err());
}
