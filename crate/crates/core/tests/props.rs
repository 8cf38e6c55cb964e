//! Property-based invariants for the ring layer.

use proptest::prelude::*;

use twistkit::fields::{Ring, RingRef, Value};
use twistkit::poly::Poly;

fn f2t() -> RingRef {
    Ring::rational_function(2).unwrap()
}

fn f3t() -> RingRef {
    Ring::rational_function(3).unwrap()
}

fn f8() -> RingRef {
    Ring::finite_field(2, 3, None).unwrap()
}

prop_compose! {
    fn rat_value(p: u64)
        (num in prop::collection::vec(0..p, 0..6),
         den in prop::collection::vec(0..p, 1..6)) -> (Vec<u64>, Vec<u64>) {
        (num, den)
    }
}

fn to_value(ring: &RingRef, raw: &(Vec<u64>, Vec<u64>)) -> Option<Value> {
    let p = ring.characteristic();
    let den = Poly::new(raw.1.clone(), p);
    if den.is_zero() {
        return None;
    }
    ring.from_rational(Poly::new(raw.0.clone(), p), den).ok()
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rat_value(2), b in rat_value(2), c in rat_value(2)) {
        let k = f2t();
        let (a, b, c) = match (to_value(&k, &a), to_value(&k, &b), to_value(&k, &c)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Ok(()),
        };
        prop_assert_eq!(k.add(&a, &k.add(&b, &c)), k.add(&k.add(&a, &b), &c));
        prop_assert_eq!(k.mul(&a, &k.mul(&b, &c)), k.mul(&k.mul(&a, &b), &c));
        prop_assert_eq!(
            k.mul(&a, &k.add(&b, &c)),
            k.add(&k.mul(&a, &b), &k.mul(&a, &c))
        );
        prop_assert_eq!(k.add(&a, &k.neg(&a)), k.zero());
        if k.is_unit(&a) {
            prop_assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
        }
    }

    #[test]
    fn canonical_encoding_is_equality(a in rat_value(3), b in rat_value(3)) {
        let k = f3t();
        let (a, b) = match (to_value(&k, &a), to_value(&k, &b)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(()),
        };
        prop_assert_eq!(a == b, k.encode(&a) == k.encode(&b));
        prop_assert_eq!(k.decode(&k.encode(&a)).unwrap(), a);
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism(a in rat_value(2), b in rat_value(2)) {
        let k = f2t();
        let (a, b) = match (to_value(&k, &a), to_value(&k, &b)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(()),
        };
        prop_assert_eq!(
            k.frobenius(&k.mul(&a, &b)),
            k.mul(&k.frobenius(&a), &k.frobenius(&b))
        );
        prop_assert_eq!(
            k.frobenius(&k.add(&a, &b)),
            k.add(&k.frobenius(&a), &k.frobenius(&b))
        );
    }

    #[test]
    fn subfield_is_closed_and_contains_pth_powers(a in rat_value(3), b in rat_value(3)) {
        let k = f3t();
        let (a, b) = match (to_value(&k, &a), to_value(&k, &b)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(()),
        };
        // Frobenius images always land in F_p(t^p).
        prop_assert!(k.in_pth_power_subfield(&k.frobenius(&a)).unwrap());
        // The subfield is closed under the field operations.
        if k.in_pth_power_subfield(&a).unwrap() && k.in_pth_power_subfield(&b).unwrap() {
            prop_assert!(k.in_pth_power_subfield(&k.add(&a, &b)).unwrap());
            prop_assert!(k.in_pth_power_subfield(&k.mul(&a, &b)).unwrap());
            if k.is_unit(&a) {
                prop_assert!(k.in_pth_power_subfield(&k.inv(&a).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn finite_field_fermat(x in 0u64..8) {
        let k = f8();
        let v = Value::Fin(x);
        prop_assert_eq!(k.pow(&v, 8), v);
    }
}
