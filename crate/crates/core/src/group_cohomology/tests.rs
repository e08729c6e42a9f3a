use proptest::prelude::*;

use super::*;
use crate::error::Error;

fn module(p: u64, rank: u32, torsion: Vec<u32>, tau: Vec<Vec<i64>>) -> FgInvModule {
    FgInvModule::new(p, rank, torsion, tau, false).unwrap()
}

fn h(m: &FgInvModule, i: u32) -> ModDesc {
    z2_cohomology(m, i).unwrap()
}

fn desc(rank: u32, torsion: &[u32]) -> ModDesc {
    ModDesc { rank, scaled: vec![], torsion: torsion.to_vec() }
}

mod cohomology {
    use super::*;

    #[test]
    fn trivial_free_at_two() {
        let m = FgInvModule::trivial_free(2, 1);
        assert_eq!(h(&m, 0), desc(1, &[]));
        for i in [1, 3, 5] {
            assert_eq!(h(&m, i), ModDesc::zero(), "no spurious 2-torsion in degree {i}");
        }
        for i in [2, 4, 6] {
            assert_eq!(h(&m, i), desc(0, &[1]));
        }
    }

    #[test]
    fn trivial_free_at_odd_prime() {
        let m = FgInvModule::trivial_free(3, 2);
        assert_eq!(h(&m, 0), desc(2, &[]));
        for i in 1..6 {
            assert!(h(&m, i).is_zero());
        }
    }

    #[test]
    fn sign_and_swap() {
        let sign = module(2, 1, vec![], vec![vec![-1]]);
        assert!(h(&sign, 0).is_zero());
        assert_eq!(h(&sign, 1), desc(0, &[1]));
        assert!(h(&sign, 2).is_zero());
        let swap = module(2, 2, vec![], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(h(&swap, 0), desc(1, &[]));
        for i in 1..5 {
            assert!(h(&swap, i).is_zero(), "induced module is acyclic in degree {i}");
        }
    }

    #[test]
    fn cyclic_torsion() {
        let m = module(2, 0, vec![2], vec![vec![1]]);
        assert_eq!(h(&m, 0), desc(0, &[2]));
        assert_eq!(h(&m, 1), desc(0, &[1]));
        assert_eq!(h(&m, 2), desc(0, &[1]));
        let neg = module(2, 0, vec![3], vec![vec![-1]]);
        assert_eq!(h(&neg, 0), desc(0, &[1]));
        assert_eq!(h(&neg, 1), desc(0, &[1]));
    }

    #[test]
    fn divisible_is_acyclic() {
        let m = FgInvModule::new(2, 2, vec![], vec![vec![1, 0], vec![0, -1]], true).unwrap();
        assert_eq!(h(&m, 0), desc(1, &[]));
        assert!(h(&m, 1).is_zero());
        assert!(h(&m, 2).is_zero());
    }

    #[test]
    fn rejects_non_involutions() {
        assert!(matches!(FgInvModule::new(2, 1, vec![], vec![vec![2]], false), Err(Error::Malformed(_))));
        assert!(matches!(FgInvModule::new(2, 2, vec![], vec![vec![1, 1], vec![0, 1]], false), Err(Error::Malformed(_))));
        // τ = 3 is an involution on Z/8 but not on Z/16
        assert!(FgInvModule::new(2, 0, vec![3], vec![vec![3]], false).is_ok());
        assert!(FgInvModule::new(2, 0, vec![4], vec![vec![3]], false).is_err());
        assert!(FgInvModule::new(4, 1, vec![], vec![vec![1]], false).is_err());
    }

    #[test]
    fn kunneth_of_two_curves() {
        let curve: Vec<_> = [1, 2, 1].iter().map(|&r| FgInvModule::trivial_free(2, r)).collect();
        let prod = kunneth_assemble(&curve, &curve).unwrap();
        let ranks: Vec<u32> = prod.iter().map(|m| m.rank).collect();
        assert_eq!(ranks, vec![1, 4, 6, 4, 1]);
        assert!(prod.iter().all(|m| m.validate().is_ok()));
        let swap = module(2, 2, vec![], vec![vec![0, 1], vec![1, 0]]);
        let sq = kunneth_assemble(&[swap.clone()], &[swap]).unwrap();
        assert_eq!(h(&sq[0], 0), desc(2, &[]));
        let tors = FgInvModule::trivial_elementary(2, 1);
        assert!(matches!(kunneth_assemble(&[tors], &curve), Err(Error::Unsupported(_))));
    }

    fn unimodular() -> impl Strategy<Value = Vec<Vec<i64>>> {
        // product of elementary 3x3 transvections
        prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6).prop_map(|ops| {
            let mut u = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
            for (i, j, c) in ops {
                if i != j {
                    for k in 0..3 {
                        u[i][k] += c * u[j][k];
                    }
                }
            }
            u
        })
    }

    fn inverse3(u: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let m = |i: usize, j: usize| u[i][j];
        let mut inv = vec![vec![0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = ((j + 1) % 3, (j + 2) % 3);
                let (c, d) = ((i + 1) % 3, (i + 2) % 3);
                inv[i][j] = m(a, c) * m(b, d) - m(a, d) * m(b, c);
            }
        }
        inv
    }

    fn conj(u: &[Vec<i64>], t: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let ui = inverse3(u);
        let mul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
            (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
        };
        mul(&mul(u, t), &ui)
    }

    proptest! {
        #[test]
        fn invariant_under_change_of_basis(u in unimodular(), kind in 0usize..3) {
            let base = [
                vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
                vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]],
                vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]],
            ][kind].clone();
            let a = module(2, 3, vec![], base);
            let b = module(2, 3, vec![], conj(&u, &a.tau));
            for i in 0..5 {
                prop_assert_eq!(h(&a, i), h(&b, i));
            }
        }

        #[test]
        fn two_periodic(kind in 0usize..3, e in 1u32..4) {
            let tau = [vec![vec![1]], vec![vec![-1]], vec![vec![1]]][kind].clone();
            let m = if kind == 2 { module(2, 0, vec![e], tau) } else { module(2, 1, vec![], tau) };
            prop_assert_eq!(h(&m, 1), h(&m, 3));
            prop_assert_eq!(h(&m, 2), h(&m, 4));
        }
    }
}

mod pages {
    use super::*;

    fn curve_rows() -> Vec<FgInvModule> {
        [1, 2, 1].iter().map(|&r| FgInvModule::trivial_free(2, r)).collect()
    }

    #[test]
    fn figures_match_fixtures_byte_for_byte() {
        for n in FIGURES {
            assert!(figure_matches(n).unwrap(), "figure {n}");
            let parsed = SpectralPage::from_json(figure_fixture(n).unwrap()).unwrap();
            assert_eq!(parsed, compute_figure(n).unwrap());
        }
    }

    #[test]
    fn coherent_differentials_are_isomorphisms() {
        let rows = [FgInvModule::trivial_elementary(2, 1), FgInvModule::trivial_elementary(2, 1)];
        let e2 = build_e2(&rows, 4, Coefficients::Coherent).unwrap();
        let ab = Abutment::new(vec![ModDesc::elementary(1), ModDesc::elementary(1), ModDesc::zero(), ModDesc::zero()]);
        let forced = force_differentials(&e2, &ab).unwrap();
        assert_eq!(forced.marked.differentials.len(), 3);
        assert!(forced.marked.differentials.iter().all(|d| d.status == DiffStatus::ForcedIso));
    }

    #[test]
    fn crystalline_kernels_are_scaled() {
        let e2 = build_e2(&curve_rows(), 5, Coefficients::Crystalline).unwrap();
        let ab = Abutment::new(vec![ModDesc::free(1), ModDesc::free(2), ModDesc::free(1)]);
        let f = force_differentials(&e2, &ab).unwrap();
        assert!(f.marked.differentials.iter().all(|d| d.status == DiffStatus::ForcedRank && d.rank == Some(1)));
        assert_eq!(f.next.cells[1][0], ModDesc { rank: 2, scaled: vec![0, 1], torsion: vec![] });
        assert_eq!(cell_name(Coefficients::Crystalline, 2, &f.next.cells[2][0]), "2W(k)");
    }

    #[test]
    fn ambiguous_abutment_cannot_force() {
        let e2 = build_e2(&curve_rows(), 5, Coefficients::Crystalline).unwrap();
        let ab = Abutment::new(vec![ModDesc::free(1), ModDesc::free(2), desc(1, &[1])]);
        match force_differentials(&e2, &ab) {
            Err(Error::Unsupported(msg)) => assert!(msg.contains("(0,1)"), "{msg}"),
            other => panic!("{other:?}"),
        }
        // supplying the open differential settles it
        let d = Differential { page: 2, from: [0, 1], to: [2, 0], status: DiffStatus::Supplied, rank: Some(0) };
        let f = force_differentials_with(&e2, &ab, &[d]).unwrap();
        assert_eq!(f.next.cells[0][2], ModDesc::elementary(1));
    }

    #[test]
    fn unsupported_patterns() {
        let rows = [FgInvModule::trivial_elementary(2, 1), module(2, 0, vec![2], vec![vec![1]])];
        let e2 = build_e2(&rows, 4, Coefficients::Crystalline).unwrap();
        let ab = Abutment::new(vec![ModDesc::elementary(1)]);
        assert!(matches!(force_differentials(&e2, &ab), Err(Error::Unsupported(m)) if m.starts_with("cannot force")));
        let inconsistent = Abutment::new(vec![ModDesc::free(5)]);
        let e2 = build_e2(&curve_rows(), 5, Coefficients::Crystalline).unwrap();
        assert!(force_differentials(&e2, &inconsistent).is_err());
        let mut e3 = e2.clone();
        e3.page = 3;
        assert!(force_differentials(&e3, &inconsistent).is_err());
    }

    #[test]
    fn markdown_layout() {
        let md = render_markdown(&compute_figure(4).unwrap());
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[4], "| 2 | $W(k)$ | $0$ | $k$ | $0$ | $k$ |");
        assert_eq!(lines[6], "| 0 | $W(k)$ | $0$ | $k$ | $0$ | $k$ |");
        assert!(md.contains("$W(k)^{\\oplus 2}$"));
        assert!(render_markdown(&compute_figure(7).unwrap()).contains("$2\\mathbb{Z}_2$"));
    }
}
