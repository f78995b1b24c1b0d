use jspec_core::chains::classify_point;
use jspec_core::kinds::SpectrumKind;
use jspec_core::koszul::{build_koszul, homology_dims, kunneth, tensor_total_complex, HomologyProfile};
use jspec_core::linalg::{kron, rank, ExactMatrix, Matrix, Qi, RankConfig, Scalar};
use jspec_core::model::FiniteTuple;
use jspec_core::region::{Region, REGION_TOL};
use jspec_core::tensor::{mult_tuple, tensor_tuple, vec_of};
use num_complex::Complex64;
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        let data = v.into_iter().map(|x| Qi::from_parts(x, 0)).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    })
}

/// Upper triangular, so the eigenvalues are integers.
fn triangular(n: usize) -> impl Strategy<Value = ExactMatrix> {
    int_matrix(n, n).prop_map(move |mut t| {
        for i in 0..n {
            for j in 0..i {
                t.set(i, j, Qi::zero());
            }
        }
        t
    })
}

/// `(A, p(A))` for a random triangular `A` and `p(x) = x² + c·x`.
fn commuting_pair(n: usize) -> impl Strategy<Value = FiniteTuple<Qi>> {
    (triangular(n), -2i64..=2).prop_map(|(a, c)| {
        let b = a.mul(&a).unwrap().add(&a.scale(&Qi::from_parts(c, 0))).unwrap();
        FiniteTuple::commuting(vec![a, b]).unwrap()
    })
}

fn int_point(n: usize) -> impl Strategy<Value = Vec<Qi>> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| v.into_iter().map(|x| Qi::from_parts(x, 0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vec_turns_products_into_kronecker(s in int_matrix(2, 2), x in int_matrix(2, 3), t in int_matrix(3, 3)) {
        let lhs = vec_of(&s.mul(&x).unwrap().mul(&t).unwrap());
        let rhs = kron(&t.transpose(), &s).mul(&vec_of(&x)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_and_float_rank_agree(m in int_matrix(4, 5)) {
        let exact = rank(&m, &RankConfig::exact()).unwrap();
        let float = rank(&m.to_float(), &RankConfig::float()).unwrap();
        prop_assert_eq!(exact, float);
        prop_assert_eq!(exact, rank(&m.transpose(), &RankConfig::exact()).unwrap());
    }

    #[test]
    fn koszul_euler_characteristic_vanishes(t in commuting_pair(3), z in int_point(2)) {
        let k = build_koszul(&t, &z).unwrap();
        let h = homology_dims(&k, &RankConfig::exact()).unwrap();
        prop_assert_eq!(h.euler(), 0);
        // H₀ and H₂ of a pair are the cokernel of the range sum and the joint kernel.
        let c = classify_point(&t, &z, &RankConfig::exact(), None).unwrap();
        prop_assert_eq!(h.dims[0] > 0, c.flags.get(SpectrumKind::Defect));
        prop_assert_eq!(h.dims[2] > 0, c.flags.get(SpectrumKind::ApproxPoint));
    }

    #[test]
    fn tensor_complex_homology_is_the_convolution(s in commuting_pair(2), t in triangular(2), z in int_point(3)) {
        let t = FiniteTuple::single(t).unwrap();
        let cfg = RankConfig::exact();
        let (ks, kt) = (build_koszul(&s, &z[..2]).unwrap(), build_koszul(&t, &z[2..]).unwrap());
        let direct = homology_dims(&build_koszul(&tensor_tuple(&s, &t).unwrap().tuple, &z).unwrap(), &cfg).unwrap();
        let total = homology_dims(&tensor_total_complex(&ks, &kt).unwrap(), &cfg).unwrap();
        let conv = kunneth(&homology_dims(&ks, &cfg).unwrap(), &homology_dims(&kt, &cfg).unwrap());
        prop_assert_eq!(&direct, &conv);
        prop_assert_eq!(&total, &conv);
    }

    #[test]
    fn multiplication_tuple_commutes(s in commuting_pair(2), t in commuting_pair(3)) {
        let m = mult_tuple(&s, &t).unwrap();
        prop_assert!(m.tuple.validate_commuting().passed());
        prop_assert_eq!(m.tuple.dim(), 6);
    }

    #[test]
    fn kunneth_is_symmetric_and_multiplicative(a in prop::collection::vec(0usize..4, 1..4), b in prop::collection::vec(0usize..4, 1..4)) {
        let (a, b) = (HomologyProfile { dims: a }, HomologyProfile { dims: b });
        let ab = kunneth(&a, &b);
        prop_assert_eq!(&ab, &kunneth(&b, &a));
        prop_assert_eq!(ab.dims.iter().sum::<usize>(), a.dims.iter().sum::<usize>() * b.dims.iter().sum::<usize>());
        prop_assert_eq!(ab.euler(), a.euler() * b.euler());
    }

    #[test]
    fn region_products_and_unions(x in -2.0f64..2.0, y in -2.0f64..2.0, r in 0.1f64..2.0) {
        let o = Complex64::new(0.0, 0.0);
        let z = [Complex64::new(x, 0.0), Complex64::new(y, 0.0)];
        let (disk, circle) = (Region::disk(o, r), Region::circle(o, r));
        let p = Region::product(vec![disk.clone(), circle.clone()]);
        prop_assert_eq!(
            p.contains(&z, REGION_TOL),
            disk.contains(&z[..1], REGION_TOL) && circle.contains(&z[1..], REGION_TOL)
        );
        let u = Region::union(1, vec![disk.clone(), circle]);
        prop_assert_eq!(u.contains(&z[..1], REGION_TOL), disk.contains(&z[..1], REGION_TOL));
        prop_assert!(p.check_compact().is_ok());
        let proj = p.project(1).unwrap();
        prop_assert_eq!(proj.contains(&z[..1], REGION_TOL), disk.contains(&z[..1], REGION_TOL));
    }
}
