use gaclass::error::Error;
use gaclass::field::{field_make, Field};
use gaclass::matrix::{companion, jordan_block, MatFq};
use gaclass::poly::{irreducibles_up_to, PolyFq};
use proptest::prelude::*;

const FIELDS: [(u64, u32); 5] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)];

fn any_field() -> impl Strategy<Value = Field> {
    (0..FIELDS.len()).prop_map(|i| field_make(FIELDS[i].0, FIELDS[i].1).unwrap())
}

fn square(f: Field, n: usize) -> impl Strategy<Value = MatFq> {
    let q = f.q();
    prop::collection::vec(0..q, n * n).prop_map(move |d| MatFq::new(&f, n, n, d).unwrap())
}

fn field_and_square(max_n: usize) -> impl Strategy<Value = MatFq> {
    (any_field(), 1..=max_n).prop_flat_map(|(f, n)| square(f, n))
}

fn field_and_two_squares(max_n: usize) -> impl Strategy<Value = (MatFq, MatFq)> {
    (any_field(), 1..=max_n).prop_flat_map(|(f, n)| (square(f.clone(), n), square(f, n)))
}

fn zero(m: &MatFq) -> MatFq {
    MatFq::zeros(m.field(), m.rows(), m.cols())
}

proptest! {
    #[test]
    fn rank_nullity(m in field_and_square(5)) {
        prop_assert_eq!(m.rank() + m.nullity(), m.cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn cayley_hamilton(m in field_and_square(5)) {
        let chi = m.char_poly().unwrap();
        prop_assert_eq!(chi.degree(), Some(m.rows()));
        prop_assert!(chi.is_monic());
        prop_assert_eq!(m.eval_poly(&chi).unwrap(), zero(&m));
    }

    #[test]
    fn inverse_and_determinant(m in field_and_square(5)) {
        let det = m.det().unwrap();
        prop_assert_eq!(det != 0, m.is_invertible());
        match m.inverse() {
            Ok(inv) => {
                let id = MatFq::identity(m.field(), m.rows());
                prop_assert_eq!(m.mul(&inv).unwrap(), id.clone());
                prop_assert_eq!(inv.mul(&m).unwrap(), id);
            }
            Err(e) => prop_assert_eq!(e, Error::Singular),
        }
    }

    #[test]
    fn determinant_is_multiplicative((a, b) in field_and_two_squares(4)) {
        let f = a.field().clone();
        prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), f.mul(a.det().unwrap(), b.det().unwrap()));
    }

    #[test]
    fn similarity_invariants((a, p) in field_and_two_squares(4)) {
        prop_assume!(p.is_invertible());
        let b = p.mul(&a).unwrap().mul(&p.inverse().unwrap()).unwrap();
        prop_assert_eq!(a.char_poly().unwrap(), b.char_poly().unwrap());
        for g in irreducibles_up_to(a.field(), 2) {
            prop_assert_eq!(a.nullity_tower(&g, 4).unwrap(), b.nullity_tower(&g, 4).unwrap());
        }
    }

    #[test]
    fn nullity_towers_are_monotone(m in field_and_square(5)) {
        for g in irreducibles_up_to(m.field(), 2) {
            let tower = m.nullity_tower(&g, 6).unwrap();
            for w in tower.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
            prop_assert!(tower.iter().all(|&v| v <= m.rows()));
            prop_assert_eq!(tower[0] % g.degree().unwrap(), 0);
        }
    }

    #[test]
    fn key_round_trip(m in field_and_square(4)) {
        let back = MatFq::from_key(m.field(), m.rows(), m.cols(), m.key());
        prop_assert_eq!(back, m.clone());
        let json = MatFq::from_json(m.field(), &m.to_json()).unwrap();
        prop_assert_eq!(json, m);
    }
}

/// Every 2×2 matrix over F_2 and F_3, not only the invertible ones.
#[test]
fn cayley_hamilton_exhaustive_2x2() {
    for p in [2, 3] {
        let f = field_make(p, 1).unwrap();
        let q = f.q();
        let mut invertible = 0;
        for code in 0..q.pow(4) {
            let d: Vec<u32> = (0..4).map(|i| code / q.pow(i) % q).collect();
            let m = MatFq::new(&f, 2, 2, d).unwrap();
            let chi = m.char_poly().unwrap();
            let trace = f.add(m.get(0, 0), m.get(1, 1));
            let det = m.det().unwrap();
            assert_eq!(chi, PolyFq::new(&f, vec![det, f.neg(trace), 1]));
            assert_eq!(m.eval_poly(&chi).unwrap(), zero(&m));
            assert_eq!(m.rank() + m.nullity(), 2);
            invertible += usize::from(m.is_invertible());
        }
        let q = q as usize;
        assert_eq!(invertible, (q * q - 1) * (q * q - q));
    }
}

#[test]
fn jordan_blocks_have_the_expected_towers() {
    let f = field_make(3, 1).unwrap();
    let g = PolyFq::new(&f, vec![1, 0, 1]);
    let j = jordan_block(&g, 3);
    assert_eq!(j.rows(), 6);
    assert_eq!(j.char_poly().unwrap(), g.pow(3));
    assert_eq!(j.nullity_tower(&g, 4).unwrap(), vec![2, 4, 6, 6]);
    let c = companion(&g.pow(2));
    assert_eq!(c.char_poly().unwrap(), g.pow(2));
    assert_eq!(c.nullity_tower(&g, 3).unwrap(), vec![2, 4, 4]);
}

#[test]
fn shape_and_polynomial_errors() {
    let f = field_make(2, 1).unwrap();
    let a = MatFq::identity(&f, 2);
    let b = MatFq::identity(&f, 3);
    assert!(matches!(a.mul(&b), Err(Error::ShapeMismatch(_))));
    let reducible = PolyFq::new(&f, vec![1, 0, 1]);
    assert!(matches!(
        a.nullity_tower(&reducible, 2),
        Err(Error::BadPolynomial(_))
    ));
    assert!(MatFq::new(&f, 2, 2, vec![0, 1, 2, 0]).is_err());
}
