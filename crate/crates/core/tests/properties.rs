use num_bigint::BigInt;
use proptest::prelude::*;

use canord::cycliccover::eigenspace_decompose;
use canord::cyclotomic::{minimize_conductor, root_of_unity, CycloNumber, Rational};
use canord::lattice::{fundamental_cycle, linear_equivalence_solve, standard_config, torsion_order, DivisorClass};
use canord::mckay::{table_extension, table_group};
use canord::ramdata::CanonicalType;
use canord::twisted::{block_count, mu_idempotent, AlgebraElement};

fn cyclo(m: u64, coeffs: &[(i64, i64)]) -> CycloNumber {
    let poly = coeffs.iter().map(|&(p, q)| Rational::new(BigInt::from(p), BigInt::from(q))).collect();
    CycloNumber::from_poly(m, poly)
}

fn element() -> impl Strategy<Value = CycloNumber> {
    (1u64..=12, prop::collection::vec((-4i64..=4, 1i64..=3), 1..=6)).prop_map(|(m, c)| cyclo(m, &c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn field_distributive(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn field_inverse(a in element()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn root_order_exact(m in 1u64..=30, k in -40i64..=40) {
        let g = num_integer::gcd(m as i64, k.rem_euclid(m as i64)).max(1) as u64;
        let want = if k.rem_euclid(m as i64) == 0 { 1 } else { m / g };
        prop_assert_eq!(root_of_unity(m, k).root_order(m), Some(want));
    }

    #[test]
    fn embed_then_minimize(a in element(), k in 1u64..=4) {
        let a = minimize_conductor(&a);
        let up = a.embed(a.conductor() * k);
        prop_assert_eq!(minimize_conductor(&up), a);
    }

    #[test]
    fn torsion_order_is_minimal(
        m in 1u32..=7,
        coeffs in prop::collection::vec(-3i64..=3, 7),
        mask in 1u32..128,
    ) {
        let lat = standard_config('A', m).unwrap();
        let terms: Vec<(usize, i64)> = (1..=m).map(|i| (lat.idx(&format!("C{i}")), coeffs[i as usize - 1])).collect();
        let d = DivisorClass::from_terms(lat.len(), &terms);
        let support: Vec<usize> = (1..=m).filter(|i| mask & (1 << (i - 1)) != 0).map(|i| lat.idx(&format!("F{i}"))).collect();
        prop_assume!(!support.is_empty());
        match torsion_order(&lat, &d, &support) {
            Some(k) => {
                prop_assert!(linear_equivalence_solve(&lat, &d.scale(k as i64), &support).is_some());
                for j in 1..k {
                    prop_assert!(linear_equivalence_solve(&lat, &d.scale(j as i64), &support).is_none());
                }
            }
            None => {
                for j in 1..=16 {
                    prop_assert!(linear_equivalence_solve(&lat, &d.scale(j), &support).is_none());
                }
            }
        }
    }

    #[test]
    fn fundamental_cycle_is_antinef(letter in prop::sample::select(vec!['A', 'D', 'E']), m in 1u32..=10) {
        let m = match letter { 'D' => m.max(4), 'E' => m.clamp(6, 8), _ => m };
        let lat = standard_config(letter, m).unwrap();
        let subset = lat.exceptional();
        let z = fundamental_cycle(&lat, &subset).unwrap();
        for &i in &subset {
            prop_assert!(z.coeffs[i] >= 1);
            prop_assert!(lat.dot_curve(&z, i) <= 0);
        }
    }

    #[test]
    fn eigenspaces_partition(e in 1u32..=6, n in 1u32..=4, extra in 0u32..=4) {
        let d = 2 * e + extra;
        let m = eigenspace_decompose(e, n, d).unwrap();
        let total: usize = m.eigenspaces.iter().map(Vec::len).sum();
        prop_assert_eq!(total, ((d + 1) * (d + 2) / 2) as usize);
        for (i, space) in m.eigenspaces.iter().enumerate() {
            prop_assert!(space.iter().all(|&x| m.eigen_index(x) as usize == i));
        }
    }
}

#[test]
fn idempotent_blocks_sum_to_class_count() {
    use CanonicalType::*;
    for t in [A12 { e: 2 }, BD { n: 2 }, Anz { n: 1, e: 3 }, L { n: 1 }] {
        let g = table_group(&t).unwrap();
        let ext = table_extension(&t, &g).unwrap();
        let e = ext.e();
        let sum: usize = (0..e)
            .map(|j| block_count(&ext, &mu_idempotent(&ext, &root_of_unity(e as u64, j as i64)).unwrap()).unwrap())
            .sum();
        assert_eq!(sum, ext.table().conjugacy_classes().len(), "{t}");
        assert_eq!(block_count(&ext, &AlgebraElement::one(&ext)).unwrap(), sum, "{t}");
        assert_eq!(ext.order(), e as usize * g.order(), "{t}");
    }
}
