use proptest::prelude::*;
use qtt_core::multiplicity::{admissible, Multiplicity, UsageVector};
use Multiplicity::{Omega, One, Zero};

const ALL: [Multiplicity; 3] = [Zero, One, Omega];

/// Independent model: a multiplicity as the set of use counts it allows,
/// with counts above one collapsed.
fn count(m: Multiplicity) -> u8 {
    match m {
        Zero => 0,
        One => 1,
        Omega => 2,
    }
}

fn from_count(n: u8) -> Multiplicity {
    match n {
        0 => Zero,
        1 => One,
        _ => Omega,
    }
}

#[test]
fn addition_and_multiplication_tables() {
    for a in ALL {
        for b in ALL {
            assert_eq!(a.add(b), from_count(count(a) + count(b)), "{a:?} + {b:?}");
            let prod = if count(a) == 0 || count(b) == 0 { 0 } else { count(a) * count(b) };
            assert_eq!(a.mul(b), from_count(prod), "{a:?} * {b:?}");
        }
    }
    assert_eq!(Zero.add(One), One);
    assert_eq!(One.add(One), Omega);
    assert_eq!(One.add(Omega), Omega);
    assert_eq!(Zero.mul(Omega), Zero);
    assert_eq!(One.mul(One), One);
    assert_eq!(Omega.mul(Omega), Omega);
}

#[test]
fn semiring_laws_exhaustively() {
    for a in ALL {
        assert_eq!(a.add(Zero), a);
        assert_eq!(Zero.add(a), a);
        assert_eq!(a.mul(One), a);
        assert_eq!(One.mul(a), a);
        assert_eq!(a.mul(Zero), Zero);
        assert_eq!(Zero.mul(a), Zero);
        for b in ALL {
            assert_eq!(a.add(b), b.add(a));
            assert_eq!(a.mul(b), b.mul(a));
            for c in ALL {
                assert_eq!(a.add(b).add(c), a.add(b.add(c)));
                assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
                assert_eq!(a.mul(b.add(c)), a.mul(b).add(a.mul(c)));
                assert_eq!(b.add(c).mul(a), b.mul(a).add(c.mul(a)));
            }
        }
    }
}

#[test]
fn admissible_truth_table() {
    let table = [
        (Zero, Zero, true),
        (Zero, One, false),
        (Zero, Omega, false),
        (One, Zero, false),
        (One, One, true),
        (One, Omega, false),
        (Omega, Zero, true),
        (Omega, One, true),
        (Omega, Omega, true),
    ];
    for (d, u, want) in table {
        assert_eq!(admissible(d, u), want, "admissible({d:?}, {u:?})");
    }
    assert_eq!(ALL.iter().filter(|u| admissible(One, **u)).count(), 1);
    for d in ALL {
        for u in ALL {
            if admissible(d, u) {
                assert!(admissible(d, u.add(Zero)));
            }
        }
    }
}

#[test]
fn display_columns() {
    assert_eq!(Zero.column(), "0");
    assert_eq!(One.column(), "1");
    assert_eq!(Omega.column(), "");
}

fn mult() -> impl Strategy<Value = Multiplicity> {
    prop_oneof![Just(Zero), Just(One), Just(Omega)]
}

fn usage() -> impl Strategy<Value = UsageVector> {
    proptest::collection::vec((0usize..6, mult()), 0..6).prop_map(|xs| {
        let mut u = UsageVector::new();
        for (l, m) in xs {
            u.set(l, u.get(l).add(m));
        }
        u
    })
}

proptest! {
    #[test]
    fn usage_vectors_add_pointwise(a in usage(), b in usage()) {
        let s = a.add(&b);
        for l in 0..6 {
            prop_assert_eq!(s.get(l), a.get(l).add(b.get(l)));
        }
        prop_assert!(s.iter().all(|(_, m)| m != Zero));
    }

    #[test]
    fn scaling_distributes(a in usage(), b in usage(), m in mult()) {
        let lhs = a.add(&b).scale(m);
        let rhs = a.scale(m).add(&b.scale(m));
        for l in 0..6 {
            prop_assert_eq!(lhs.get(l), rhs.get(l));
        }
    }

    #[test]
    fn scaling_by_zero_empties(a in usage()) {
        prop_assert!(a.scale(Zero).is_empty());
    }
}
