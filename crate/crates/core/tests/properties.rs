use num_bigint::BigInt;
use proptest::prelude::*;

use prym_core::butterfly::{admissible_finite, apply, apply_complete, MoveLabel};
use prym_core::components::{sweep, Exec, Sets};
use prym_core::exactnum::{col_hnf, lattice_hnf, IntMat2, QuadNum};
use prym_core::geometry::{build_surface, SurfaceModel};
use prym_core::prototypes::{
    enumerate, enumerate_complete, enumerate_reduced, reduced_to_prototype, Model, Prototype, ReducedClass,
};

const DS: [u64; 6] = [5, 8, 17, 41, 68, 292];

fn quad() -> impl Strategy<Value = QuadNum> {
    (0..DS.len(), -50i64..50, 1i64..12, -50i64..50, 1i64..12).prop_map(|(k, a, da, b, db)| {
        QuadNum::from_frac(a, da, DS[k]) + QuadNum::from_frac(b, db, DS[k]) * QuadNum::sqrt_d(DS[k])
    })
}

fn same_field() -> impl Strategy<Value = (QuadNum, QuadNum, QuadNum)> {
    (0..DS.len(), prop::array::uniform6(-40i64..40)).prop_map(|(k, v)| {
        let d = DS[k];
        let q = |a, b| QuadNum::from_ints(a, b, d);
        (q(v[0], v[1]), q(v[2], v[3]), q(v[4], v[5]))
    })
}

/// A random element of `𝒫_D` (or `𝒫̃_D`) for a discriminant with one.
fn prototype(genus: u8) -> impl Strategy<Value = Prototype> {
    (17i64..600, any::<prop::sample::Index>()).prop_filter_map("no prototype", move |(d, i)| {
        let ps = enumerate(d, genus, Model::A);
        (!ps.is_empty()).then(|| ps[i.index(ps.len())])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((x, y, z) in same_field()) {
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
            prop_assert_eq!(&y * &y.inv(), QuadNum::one(y.disc()));
        }
        let xx = &x * &x.conj();
        prop_assert!(xx.is_rational());
        prop_assert_eq!(xx.rational_part(), &x.norm());
    }

    #[test]
    fn order_matches_floats(x in quad()) {
        let f = x.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(x.sign(), if f > 0.0 { 1 } else { -1 });
        }
        let fl = x.floor();
        let int = |n: BigInt| QuadNum::new(n.into(), BigInt::from(0).into(), x.disc());
        prop_assert!(int(fl.clone()) <= x);
        prop_assert!(int(fl + 1) > x);
    }

    #[test]
    fn hnf_is_triangular_and_unimodular(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
        let m = IntMat2::new(a, b, c, d);
        prop_assume!(m.det() != 0);
        let h = col_hnf(&m).unwrap();
        prop_assert_eq!(h.u.det().abs(), 1);
        let mut mu = m.mul(&h.u);
        if h.row_sign < 0 {
            mu.0[0] = [-mu.0[0][0], -mu.0[0][1]];
        }
        prop_assert_eq!(mu, h.hnf);
        prop_assert_eq!(h.hnf.0[1][0], 0);
        prop_assert!(h.hnf.0[0][0] > 0 && h.hnf.0[1][1] > 0);
        prop_assert_eq!(h.hnf.det().abs(), m.det().abs());
    }

    #[test]
    fn lattice_covolume(gens in prop::collection::vec((-20i64..20, -20i64..20), 2..5)) {
        let big: Vec<(BigInt, BigInt)> = gens.iter().map(|&(x, y)| (x.into(), y.into())).collect();
        let mut g = 0i64;
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let det = gens[i].0 * gens[j].1 - gens[i].1 * gens[j].0;
                g = num_integer::gcd(g, det);
            }
        }
        match lattice_hnf(&big) {
            Ok((a, b, c)) => {
                prop_assert_eq!(a.clone() * c, BigInt::from(g));
                prop_assert!(b >= BigInt::from(0) && b < a);
            }
            Err(_) => prop_assert_eq!(g, 0),
        }
    }

    #[test]
    fn moves_preserve_invariants(p in prototype(3), q in 1i64..8) {
        let mut labels = vec![MoveLabel::Infinity];
        if admissible_finite(&p).contains(&q) {
            labels.push(MoveLabel::Finite(q));
        }
        for l in labels {
            let p2 = apply(&p, l).unwrap();
            prop_assert_eq!(p2.disc, p.disc);
            prop_assert!(p2.validate().is_ok());
            prop_assert_eq!((p2.e + p.e).rem_euclid(4), 0);
        }
    }

    #[test]
    fn genus4_moves_preserve_invariants(p in prototype(4)) {
        for q in admissible_finite(&p).into_iter().map(MoveLabel::Finite).chain([MoveLabel::Infinity]) {
            let p2 = apply(&p, q).unwrap();
            prop_assert_eq!(p2.disc, p.disc);
            prop_assert_eq!(p2.genus, 4);
        }
    }

    #[test]
    fn complete_moves_keep_discriminant(d in 17i64..400, i in any::<prop::sample::Index>()) {
        let all = enumerate_complete(d);
        prop_assume!(!all.is_empty());
        let cp = all[i.index(all.len())];
        let next = apply_complete(&cp, MoveLabel::Infinity).unwrap();
        prop_assert_eq!(next.proto.disc, d);
    }

    #[test]
    fn reduced_round_trip(d in 17i64..2000, i in any::<prop::sample::Index>()) {
        let all = enumerate_reduced(d, 3);
        prop_assume!(!all.is_empty());
        let r = all[i.index(all.len())];
        let p = reduced_to_prototype(&r).unwrap();
        prop_assert!(p.is_reduced());
        prop_assert_eq!(ReducedClass::new(p.e, p.disc, 3).unwrap(), r);
    }

    #[test]
    fn surfaces_are_consistent(p in prototype(3)) {
        for m in [SurfaceModel::APlus, SurfaceModel::AMinus] {
            let s = build_surface(&p, m).unwrap();
            prop_assert!(s.validate().is_ok());
            prop_assert_eq!(s.area(), s.model_area());
            prop_assert_eq!(s.total_angle_pi(), 10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sequential_and_default_sweeps_agree(start in 17i64..1500, len in 1i64..60) {
        let r = start..=start + len;
        let a = sweep(r.clone(), 3, Sets::ALL, Exec::Sequential).unwrap();
        let b = sweep(r, 3, Sets::ALL, Exec::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}
