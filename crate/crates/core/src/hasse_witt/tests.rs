use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::galois_witt::{FieldDesc, FqElem};

fn f2() -> Arc<FieldDesc> {
    FieldDesc::new(2, 1).unwrap()
}

fn parse(text: &str, k: &Arc<FieldDesc>) -> HomogPoly {
    parse_poly(text, k, None).unwrap()
}

mod polys {
    use super::*;

    #[test]
    fn powers() {
        let k = f2();
        let f = parse("x0 + x1", &k);
        assert_eq!(f.pow(0), HomogPoly::one(&k, 2));
        assert_eq!(f.pow(1), f);
        assert_eq!(f.pow(2), parse("x0^2 + x1^2", &k));
        let k3 = FieldDesc::new(3, 1).unwrap();
        let g = parse("x0 + x1", &k3);
        assert_eq!(g.pow(3), parse("x0^3 + x1^3", &k3));
        assert_eq!(g.pow(2).coeff(&[1, 1]), k3.from_int(2));
    }

    #[test]
    fn parser() {
        let k = f2();
        let f = parse("x0^2*x1^2 + x2^4", &k);
        assert_eq!((f.nvars, f.degree, f.num_terms()), (3, 4, 2));
        assert_eq!(parse(&f.to_string(), &k), f);
        assert!(parse("x0 - x0 + x1", &k) == parse("x1", &k));
        assert_eq!(parse("(x0+x1)^2", &k), parse("x0^2+x1^2", &k));
        assert!(parse_poly("x0^2 + x1", &k, None).is_err());
        assert!(parse_poly("x0 + ", &k, None).is_err());
        assert!(parse_poly("x3", &k, Some(2)).is_err());
        let k4 = FieldDesc::new(2, 2).unwrap();
        let g = parse("a*x0 + (a+1)*x1", &k4);
        assert_eq!(g.coeff(&[1, 0]), k4.generator());
        assert_eq!(parse(&g.to_string(), &k4), g);
    }

    #[test]
    fn json_round_trip() {
        let f = geometry::paper_hypersurface(4, 3).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"p":2,"m":1,"n":3,"d":4,"terms":"#));
        let g: HomogPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn partials_in_characteristic_two() {
        let k = f2();
        let f = parse("x0^2*x1 + x0*x1*x2", &k);
        assert_eq!(f.partial(0), parse("x1*x2", &k));
        assert_eq!(f.partial(1), parse("x0^2 + x0*x2", &k));
    }
}

mod hasse_witt_matrix {
    use super::*;

    fn entry(f: &HomogPoly) -> FqElem {
        let h = hw_matrix(f);
        assert_eq!(h.dim(), 1);
        h.matrix[0][0].clone()
    }

    #[test]
    fn small_cases() {
        let k = f2();
        let h = hw_matrix(&parse("x0*x1*x2", &k));
        assert_eq!(h.basis, vec![vec![1, 1, 1]]);
        assert!(h.matrix[0][0].is_one() && hw_invertible(&h));
        let conic = hw_matrix(&parse("x0*x1 + x2^2", &k));
        assert_eq!(conic.dim(), 0);
        assert!(hw_invertible(&conic));
        let cubic = parse("x1^2*x2 + x0*x1*x2 + x0^3 + x2^3", &k);
        assert!(entry(&cubic).is_one());
    }

    #[test]
    fn fermat_cubic_residue_classes() {
        // ordinary exactly when p ≡ 1 mod 3
        for (p, ordinary) in [(2, false), (5, false), (7, true), (11, false), (13, true)] {
            let k = FieldDesc::new(p, 1).unwrap();
            assert_eq!(!entry(&fermat(&k, 2, 3)).is_zero(), ordinary, "p = {p}");
        }
    }

    #[test]
    fn legendre_family_matches_hasse_invariant() {
        for p in [5u64, 7, 11, 13] {
            let k = FieldDesc::new(p, 1).unwrap();
            let m = (p - 1) / 2;
            let binom = |n: u64, r: u64| (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
            for lam in 2..p {
                let l = k.from_int(lam as i64);
                let hasse = (0..=m).fold(k.zero(), |acc, i| {
                    acc.add(&k.from_int((binom(m, i).pow(2) % p) as i64).mul(&l.pow(i)))
                });
                let e = Weierstrass::new(k.zero(), l.add(&k.one()).neg(), k.zero(), l.clone(), k.zero()).unwrap();
                assert_eq!(entry(&e.cubic()).is_zero(), hasse.is_zero(), "p = {p}, λ = {lam}");
            }
        }
    }

    #[test]
    fn stable_rank() {
        let k = FieldDesc::new(2, 2).unwrap();
        let (o, z, a) = (k.one(), k.zero(), k.generator());
        let mk = |m: Vec<Vec<FqElem>>| HWMatrix { field: k.clone(), basis: vec![vec![1]; m.len()], matrix: m };
        let id = mk(vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]]);
        assert!(hw_invertible(&id));
        assert_eq!(hw_stable_rank(&id), 2);
        assert_eq!(hw_stable_rank(&mk(vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]])), 0);
        let nil = mk(vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]]);
        assert!(!hw_invertible(&nil));
        assert_eq!(hw_stable_rank(&nil), 0);
        let mixed = mk(vec![vec![a.clone(), o.clone()], vec![z.clone(), z.clone()]]);
        assert_eq!(hw_stable_rank(&mixed), 1);
    }

    fn random_form(k: &Arc<FieldDesc>, nvars: usize, d: u32, seed: u64) -> HomogPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = HomogPoly::zero(k, nvars, d);
        for e in hw::compositions(nvars, d, 0) {
            f = f.add(&HomogPoly::monomial(k, e, k.random(&mut rng))).unwrap();
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn permuting_coordinates_conjugates(seed in any::<u64>(), nvars in 3usize..=4, d in 3u32..=5) {
            let k = f2();
            let f = random_form(&k, nvars, d, seed);
            let mut perm: Vec<usize> = (0..nvars).collect();
            perm.rotate_left((seed % nvars as u64) as usize);
            perm.swap(0, nvars - 1);
            let g = f.permute(&perm);
            let (hf, hg) = (hw_matrix(&f), hw_matrix(&g));
            let moved = |a: &Vec<u32>| {
                let mut b = vec![0; nvars];
                for (i, &x) in a.iter().enumerate() {
                    b[perm[i]] = x;
                }
                hg.basis.iter().position(|c| *c == b).unwrap()
            };
            for (i, a) in hf.basis.iter().enumerate() {
                for (j, b) in hf.basis.iter().enumerate() {
                    prop_assert_eq!(&hf.matrix[i][j], &hg.matrix[moved(a)][moved(b)]);
                }
            }
            prop_assert_eq!(hw_invertible(&hf), hw_invertible(&hg));
            prop_assert_eq!(hw_stable_rank(&hf), hw_stable_rank(&hg));
        }

        #[test]
        fn general_unions_are_invertible(seed in any::<u64>(), n in 2usize..=3, extra in 0u32..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = n as u32 + 1 + extra;
            let u = union_of_hyperplanes(2, n, d, &mut rng).unwrap();
            prop_assert!(hw_invertible(&hw_matrix(&u.poly)), "{:?}", u.forms);
            if d <= n as u32 + 2 {
                let t = tau_invariant_union(2, n, d, &mut rng).unwrap();
                prop_assert_eq!(t.poly.tau_swap(), t.poly.clone());
                prop_assert!(hw_invertible(&hw_matrix(&t.poly)));
            } else {
                prop_assert!(tau_invariant_union(2, n, d, &mut rng).is_err());
            }
        }

        #[test]
        fn tau_samples_are_symmetric(seed in any::<u64>(), n in 2usize..=4, d in 1u32..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = FieldDesc::new(2, 2).unwrap();
            let f = sample_tau_invariant(&k, n, d, &mut rng);
            prop_assert_eq!(f.tau_swap(), f);
        }
    }

    #[test]
    fn invertibility_is_open() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = FieldDesc::new(2, 3).unwrap();
        let mut kept = 0;
        let trials = 40;
        for _ in 0..trials {
            let u = union_of_hyperplanes(2, 2, 4, &mut rng).unwrap();
            let f = u.poly.map_coefficients(&k, geometry::embedding(&FieldDesc::new(2, u.m).unwrap(), &k).unwrap());
            let e = hw::compositions(3, 4, 0)[rand::Rng::gen_range(&mut rng, 0..15)].clone();
            let g = f.add(&HomogPoly::monomial(&k, e, k.random(&mut rng))).unwrap();
            kept += usize::from(hw_invertible(&hw_matrix(&g)));
        }
        assert!(kept > 0, "no perturbation stayed invertible");
    }
}

mod hypersurfaces {
    use super::*;

    #[test]
    fn displayed_form() {
        let k = f2();
        let f = paper_hypersurface(4, 3).unwrap();
        assert_eq!(f, parse("x0^2*x1^2 + x0*x1*x2^2 + x2^4 + x2*x3^3 + x3*(x0^3 + x1^3)", &k));
        let g = paper_hypersurface(6, 3).unwrap();
        assert_eq!(g, parse("x0^3*x1^3 + x2^6 + x2*x3^5 + x3*(x0^5 + x1^5)", &k));
        let h = paper_hypersurface(12, 4).unwrap();
        assert_eq!(h.coeff(&[3, 3, 6, 0, 0]), k.one());
        assert!(matches!(paper_hypersurface(5, 3), Err(crate::Error::InvalidParameter(m)) if m.contains("Fermat")));
        for d1 in [2, 4, 6, 8, 10, 12] {
            for n in 3..=5 {
                let f = paper_hypersurface(d1, n).unwrap();
                assert_eq!(f.tau_swap(), f, "d1 = {d1}, n = {n}");
            }
        }
    }

    #[test]
    fn scans() {
        let k = f2();
        let conic = singular_point_search(&parse("x0*x1 + x2^2", &k), 3, 1_000_000).unwrap();
        assert!(conic.points.is_empty() && conic.complete);
        let split = singular_point_search(&parse_poly("x0*x1", &k, Some(3)).unwrap(), 2, 1_000_000).unwrap();
        assert_eq!(split.points[0], (1, vec![vec![0], vec![0], vec![1]]));
        assert!(split.points.iter().all(|(_, x)| x[..2].iter().flatten().all(|&c| c == 0)));
        assert_eq!(split.points.len(), 2);
        let partial = singular_point_search(&parse("x0*x1 + x2^2", &k), 3, 10).unwrap();
        assert!(!partial.complete && partial.points_checked == 10);
    }

    #[test]
    fn paper_form_has_no_small_singular_points() {
        let f = paper_hypersurface(4, 3).unwrap();
        let scan = singular_point_search(&f, 4, 10_000_000).unwrap();
        assert!(scan.complete && scan.scanned_up_to == 4);
        assert!(scan.points.is_empty(), "{:?}", scan.points);
        let small = singular_point_search(&f, 2, 10_000_000).unwrap();
        assert!(small.points.is_empty());
    }

    #[test]
    fn general_position_examples() {
        let k = f2();
        let id: Vec<Vec<FqElem>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect();
        assert!(general_position(&id, 3));
        let mut dup = id.clone();
        dup.push(id[0].clone());
        assert!(!general_position(&dup, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = union_of_hyperplanes(2, 2, 5, &mut rng).unwrap();
        assert!(u.m >= 2, "five lines in general position need more than F_2");
    }
}

mod elliptic_curves {
    use super::*;

    fn curve(k: &Arc<FieldDesc>, a: [i64; 5]) -> Weierstrass {
        let [a1, a2, a3, a4, a6] = a.map(|x| k.from_int(x));
        Weierstrass::new(a1, a2, a3, a4, a6).unwrap()
    }

    fn points(e: &Weierstrass) -> Vec<elliptic::Point> {
        let k = e.a[0].field.clone();
        let mut out = vec![None];
        for x in k.elements() {
            for y in k.elements() {
                let p = Some((x.clone(), y));
                if e.on_curve(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    #[test]
    fn ordinary_curve_two_torsion() {
        let k = f2();
        let r = elliptic_ordinary(k.one(), k.zero(), k.zero(), k.zero(), k.one()).unwrap();
        assert!(r.ordinary);
        let e = curve(&k, [1, 0, 0, 0, 1]);
        let pt = two_torsion(&e).map(|(x, y)| (x, y));
        let pt = Some(pt.unwrap());
        assert!(e.on_curve(&pt));
        assert_eq!(e.add(&pt, &pt), None);
        assert_eq!(r.two_torsion, Some((vec![0], vec![1])));
        assert!(hw_invertible(&hw_matrix(&e.cubic())));
    }

    #[test]
    fn supersingular_curve() {
        let k4 = FieldDesc::new(2, 2).unwrap();
        let r = elliptic_ordinary(k4.zero(), k4.zero(), k4.one(), k4.zero(), k4.zero()).unwrap();
        assert!(!r.ordinary && r.two_torsion.is_none());
        let e = curve(&k4, [0, 0, 1, 0, 0]);
        for p in points(&e).iter().filter(|p| p.is_some()) {
            assert!(e.add(p, p).is_some(), "no point of order 2");
        }
        assert!(!hw_invertible(&hw_matrix(&e.cubic())));
        assert!(matches!(
            elliptic_ordinary(k4.zero(), k4.zero(), k4.zero(), k4.zero(), k4.zero()),
            Err(crate::Error::SingularCurve)
        ));
    }

    #[test]
    fn group_law_is_consistent() {
        let k = FieldDesc::new(2, 3).unwrap();
        let e = curve(&k, [1, 1, 0, 0, 1]);
        let pts = points(&e);
        for p in &pts {
            assert_eq!(e.add(p, &e.neg(p)), None);
            for q in &pts {
                let s = e.add(p, q);
                assert!(e.on_curve(&s));
                assert_eq!(s, e.add(q, p));
            }
        }
        // the 2-torsion subgroup has order 2
        assert_eq!(pts.iter().filter(|p| e.add(p, p).is_none()).count(), 2);
    }

    proptest! {
        #[test]
        fn ordinarity_matches_hasse_witt(coeffs in prop::array::uniform5(0u64..16)) {
            let k = FieldDesc::new(2, 4).unwrap();
            let [a1, a2, a3, a4, a6] = coeffs.map(|i| k.element(i));
            let Ok(e) = Weierstrass::new(a1.clone(), a2.clone(), a3.clone(), a4.clone(), a6.clone()) else {
                return Ok(());
            };
            let r = elliptic_ordinary(a1.clone(), a2, a3, a4, a6).unwrap();
            prop_assert_eq!(r.ordinary, !a1.is_zero());
            prop_assert_eq!(r.ordinary, hw_invertible(&hw_matrix(&e.cubic())));
            if let Some((x, y)) = two_torsion(&e) {
                let p = Some((x, y));
                prop_assert!(e.on_curve(&p));
                prop_assert_eq!(e.add(&p, &p), None);
            }
        }
    }
}
