use num_bigint::BigInt;
use num_traits::Zero;
use plethysm_core::plethysm::{b_arguments, coefficient, PlethysmQuery};
use plethysm_core::qpoly::{parse, Constraint};
use plethysm_core::{BigRat, Partition};

const FIVE_RAY: &str = include_str!("data/five_ray.qpoly");

fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

/// The hand-simplified closed form for the ray `s·(31,3,2,2,2)` in `S^5(S^{8s})`.
fn closed_form(s: i64) -> BigRat {
    let x = rat(s, 1);
    let fl = |a: i64, b: i64| rat((a + s).div_euclid(b), 1);
    let p = &x * rat(-289, 720) + &x * &x * rat(1, 20) + &x * &x * &x * rat(1, 720);
    let p2 = rat(5, 8) + &x * rat(1, 8);
    let p3 = rat(1, 3) - &x * rat(1, 6);
    let p4 = rat(7, 12) - &x * rat(1, 3);
    let a = p
        + p2 * fl(0, 2)
        + p3 * fl(0, 3)
        + (p4 + rat(1, 2) * fl(0, 3)) * fl(1, 3)
        + rat(1, 4) * (fl(1, 3) * fl(1, 3) + fl(0, 4) - fl(3, 4));
    let tail = [rat(1, 1), rat(3, 5), rat(4, 5), rat(4, 5), rat(4, 5)];
    a + tail[s.rem_euclid(5) as usize].clone()
}

fn lambda(s: u64) -> Partition {
    Partition::new(vec![31 * s, 3 * s, 2 * s, 2 * s, 2 * s]).unwrap()
}

#[test]
fn fixture_parses_into_four_chambers() {
    let qp = parse(FIVE_RAY).unwrap();
    assert_eq!(qp.params, vec!["s"]);
    assert_eq!(qp.pieces.len(), 4);
    assert_eq!(qp.pieces[2].chamber.bindings.len(), 2);
}

#[test]
fn fixture_matches_closed_form() {
    let qp = parse(FIVE_RAY).unwrap();
    for s in 0..=20 {
        assert_eq!(qp.evaluate_at(&[s]).unwrap(), closed_form(s), "s = {s}");
    }
    let first: Vec<BigRat> = (0..3).map(|s| qp.evaluate_at(&[s]).unwrap()).collect();
    assert_eq!(first, vec![rat(1, 1), rat(0, 1), rat(1, 1)]);
}

#[test]
fn fixture_matches_engine() {
    let qp = parse(FIVE_RAY).unwrap();
    for s in 0..=6u64 {
        let q = PlethysmQuery::sym(Partition::row(5), 8 * s, lambda(s)).unwrap();
        let engine = BigRat::from_integer(BigInt::from(coefficient(&q).unwrap()));
        // The file is indexed by b-arguments (0, 0, s) with fourth argument 6s.
        let (b, k) = b_arguments(&q).unwrap();
        if s > 0 {
            assert_eq!((b, k), (vec![0, 0, s], 6 * s));
        }
        assert_eq!(qp.evaluate_at(&[s as i64]).unwrap(), engine, "s = {s}");
    }
}

#[test]
fn fixture_simplifies_to_residue_classes() {
    let qp = parse(FIVE_RAY).unwrap();
    let simple = qp.simplify();
    let text = simple.to_string();
    assert!(text.contains(": s >= 1 and s mod 5 = 1;"), "{text}");
    assert!(text.contains(": s >= 5 and s mod 5 = 0;"), "{text}");
    assert!(text.contains(": s >= 1 and s mod 5 >= 2;"), "{text}");
    assert!(text.ends_with("[s] -> (1) : s = 0 }"), "{text}");
    for piece in &simple.pieces {
        assert!(piece.chamber.bindings.is_empty());
    }
    let residues: Vec<_> = simple.pieces[..3]
        .iter()
        .map(|p| match p.chamber.constraints.last() {
            Some(Constraint::Modulus { modulus: 5, residues, .. }) => residues.iter().copied().collect::<Vec<_>>(),
            other => panic!("{other:?}"),
        })
        .collect();
    assert_eq!(residues, vec![vec![1], vec![0], vec![2, 3, 4]]);
    for s in -50..=200 {
        assert_eq!(qp.evaluate_at(&[s]).unwrap(), simple.evaluate_at(&[s]).unwrap(), "s = {s}");
    }
    let reread = parse(&text).unwrap();
    for s in -50..=200 {
        assert_eq!(qp.evaluate_at(&[s]).unwrap(), reread.evaluate_at(&[s]).unwrap());
    }
}

#[test]
fn fixture_chambers_are_disjoint_and_round_trip() {
    let qp = parse(FIVE_RAY).unwrap();
    assert_eq!(qp.find_overlap((-100..300).map(|s| vec![BigInt::from(s)])), None);
    let back = parse(&qp.to_string()).unwrap();
    for s in -20..180 {
        assert_eq!(qp.evaluate_at(&[s]).unwrap(), back.evaluate_at(&[s]).unwrap());
    }
    assert!(qp.evaluate_at(&[-3]).unwrap().is_zero());
}
