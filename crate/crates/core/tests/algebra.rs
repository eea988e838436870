mod common;

use gaclass::algebra::{
    class_labels, multiplication_table, multiplication_table_cached, table_cache_path, ClassLabel,
    Engine, MultiplicationTable, ScanMethod,
};
use gaclass::classify::{conjugacy_class_of, GroupId, GroupKind};
use gaclass::error::{Budget, Error};
use gaclass::field::{field_make, Field};
use gaclass::types::{GAType, GLType};

use common::naive_classes;

fn f(p: u64) -> Field {
    field_make(p, 1).unwrap()
}

/// The coefficient of `K_c` does not depend on which member of `C_c` the
/// pairs are counted against; three members per class are tried.
#[test]
fn coefficients_are_independent_of_the_target_representative() {
    let field = f(2);
    let gid = GroupId::ga(3, &field).unwrap();
    let table = multiplication_table(&gid, &Budget::default()).unwrap();
    let engine = Engine::new(&field, Budget::default());
    for c in &table.classes {
        let members = conjugacy_class_of(&c.rep, &gid, &Budget::default()).unwrap();
        assert_eq!(members.len() as u64, c.size);
        for z in members.iter().take(3) {
            for a in &table.classes {
                for b in &table.classes {
                    let r = engine
                        .struct_const_at(&gid, &a.label, &b.label, &c.label, z)
                        .unwrap();
                    assert_eq!(
                        Some(r.value),
                        table.coeff_by_label(&a.label, &b.label, &c.label)
                    );
                }
            }
        }
    }
}

#[test]
fn gl_tables_match_brute_force() {
    for (p, n) in [(2, 2), (2, 3), (3, 2)] {
        let gid = GroupId::gl(n, &f(p)).unwrap();
        let table = multiplication_table(&gid, &Budget::default()).unwrap();
        let naive = naive_classes(&gid);
        assert_eq!(table.len(), naive.classes.len());
        let idx: Vec<usize> = table
            .classes
            .iter()
            .map(|c| naive.class_index(&c.rep))
            .collect();
        for (i, c) in table.classes.iter().enumerate() {
            assert_eq!(c.size as usize, naive.classes[idx[i]].len());
        }
        for a in 0..table.len() {
            for b in 0..table.len() {
                for c in 0..table.len() {
                    assert_eq!(
                        table.coeff(a, b, c),
                        naive.struct_const(idx[a], idx[b], idx[c]),
                        "{gid}"
                    );
                }
            }
        }
        assert!(table.row_mass_failures().is_empty());
        assert!(table.commutativity_failures().is_empty());
    }
}

#[test]
fn gl_2_2_class_sizes() {
    let gid = GroupId::gl(2, &f(2)).unwrap();
    let table = multiplication_table(&gid, &Budget::default()).unwrap();
    let mut sizes: Vec<u64> = table.classes.iter().map(|c| c.size).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2, 3]);
    assert_eq!(table.classes[0].size, 1);
}

#[test]
fn single_constants_agree_with_the_table() {
    let field = f(3);
    let gid = GroupId::ga(3, &field).unwrap();
    let table = multiplication_table(&gid, &Budget::default()).unwrap();
    let engine = Engine::new(&field, Budget::default());
    for a in &table.classes {
        for b in &table.classes {
            for c in &table.classes {
                let r = engine
                    .struct_const(&gid, &a.label, &b.label, &c.label)
                    .unwrap();
                let ab = table.coeff_by_label(&a.label, &b.label, &c.label);
                assert_eq!(Some(r.value), ab);
                assert_eq!(r.method, ScanMethod::ClassScan);
            }
        }
    }
}

#[test]
fn graded_products_keep_the_top_degree() {
    let field = f(2);
    let gid = GroupId::ga(4, &field).unwrap();
    let engine = Engine::new(&field, Budget::default());
    let u = ClassLabel::ga(GAType::modified(GLType::unipotent(&field, &[1]).unwrap(), 0).unwrap());
    let prod = engine.graded_product(&gid, &u, &u).unwrap();
    assert!(!prod.is_empty());
    assert!(prod.keys().all(|c| c.degree() == 2));
    let table = multiplication_table(&gid, &Budget::default()).unwrap();
    let a = table.index_of(&u).unwrap();
    for (label, v) in &prod {
        assert_eq!(table.coeff(a, a, table.index_of(label).unwrap()), *v);
    }
}

#[test]
fn undefined_classes_are_rejected() {
    let field = f(2);
    let gid = GroupId::ga(3, &field).unwrap();
    let engine = Engine::new(&field, Budget::default());
    let big =
        ClassLabel::ga(GAType::modified(GLType::unipotent(&field, &[2]).unwrap(), 0).unwrap());
    let id = ClassLabel::ga(GAType::modified(GLType::empty(&field), 0).unwrap());
    let err = engine.struct_const(&gid, &big, &id, &big).unwrap_err();
    assert_eq!(err.code(), "undefined-at-n");
    assert!(matches!(err, Error::UndefinedAtN { min_n: 4, .. }));
    assert_eq!(big.min_n(), 4);
}

#[test]
fn tables_serialize_and_cache() {
    let field = f(2);
    let gid = GroupId::ga(3, &field).unwrap();
    let table = multiplication_table(&gid, &Budget::default()).unwrap();
    let back = MultiplicationTable::from_json(&field, &table.to_json()).unwrap();
    assert_eq!(back.len(), table.len());
    for a in 0..table.len() {
        for b in 0..table.len() {
            assert_eq!(back.terms(a, b), table.terms(a, b));
        }
    }
    let csv = table.to_csv();
    let nonzero: usize = (0..table.len())
        .flat_map(|a| (0..table.len()).map(move |b| (a, b)))
        .map(|(a, b)| table.terms(a, b).len())
        .sum();
    assert_eq!(csv.lines().count(), 1 + nonzero);

    let dir = std::env::temp_dir().join(format!("gaclass-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let first = multiplication_table_cached(&gid, &Budget::default(), &dir).unwrap();
    assert!(table_cache_path(&dir, &gid).exists());
    let second = multiplication_table_cached(&gid, &Budget::default(), &dir).unwrap();
    assert_eq!(first.to_json(), second.to_json());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn labels_start_with_the_identity() {
    for kind in [GroupKind::GA, GroupKind::GL] {
        let gid = GroupId::new(kind, 3, &f(3)).unwrap();
        let labels = class_labels(&gid);
        assert_eq!(labels[0].degree(), 0);
        for w in labels.windows(2) {
            assert!(w[0].degree() <= w[1].degree());
        }
    }
}

#[test]
fn budget_errors_surface() {
    let field = f(3);
    let gid = GroupId::ga(5, &field).unwrap();
    assert!(multiplication_table(&gid, &Budget::new(1000, None))
        .unwrap_err()
        .is_budget());
}
