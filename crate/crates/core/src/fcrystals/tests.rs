use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::galois_witt::RingDesc;
use crate::linalg::{inverse, vec_sub, Mat};

fn r(a: u64, b: u64) -> Ratio<u64> {
    Ratio::new(a, b)
}

#[test]
fn ordinary_elliptic_slopes() {
    let ring = RingDesc::standard(5, 1, 4).unwrap();
    let m = SigmaModule::from_ints(&ring, &[&[1, 0], &[0, 5]]).unwrap();
    assert_eq!(m.newton_slopes().unwrap(), vec![r(0, 1), r(1, 1)]);
}

#[test]
fn supersingular_slopes() {
    let ring = RingDesc::standard(3, 1, 4).unwrap();
    let m = SigmaModule::from_ints(&ring, &[&[0, 3], &[1, 0]]).unwrap();
    assert_eq!(m.newton_slopes().unwrap(), vec![r(1, 2), r(1, 2)]);
}

#[test]
fn k3_slopes() {
    let ring = RingDesc::standard(2, 1, 24).unwrap();
    let mut a = vec![vec![ring.zero(); 22]; 22];
    a[0][0] = ring.one();
    for i in 1..21 {
        a[i][i] = ring.p_pow(1);
    }
    a[21][21] = ring.p_pow(2);
    let m = SigmaModule::new(ring, a).unwrap();
    let mut want = vec![r(0, 1)];
    want.extend(std::iter::repeat(r(1, 1)).take(20));
    want.push(r(2, 1));
    assert_eq!(m.newton_slopes().unwrap(), want);
    assert_eq!(m.unit_root_part().unwrap().basis.len(), 1);
}

#[test]
fn slopes_over_extension_divide_by_m() {
    let ring = RingDesc::standard(2, 3, 6).unwrap();
    let x = ring.x();
    let m = SigmaModule::new(ring.clone(), vec![vec![x.clone(), ring.zero()], vec![ring.zero(), x.mul_p_pow(1)]]).unwrap();
    assert_eq!(m.newton_slopes().unwrap(), vec![r(0, 1), r(1, 1)]);
}

#[test]
fn singular_determinant_is_rejected() {
    let ring = RingDesc::standard(3, 1, 2).unwrap();
    let m = SigmaModule::from_ints(&ring, &[&[1, 0], &[0, 9]]).unwrap();
    assert!(m.newton_slopes().is_err());
}

#[test]
fn fixed_points_examples() {
    let ring = RingDesc::standard(3, 1, 3).unwrap();
    let id = SigmaModule::from_ints(&ring, &[&[1, 0], &[0, 1]]).unwrap();
    let fp = id.fixed_points_f1();
    assert_eq!(fp.orders, vec![3, 3]);
    let pid = SigmaModule::from_ints(&ring, &[&[3, 0], &[0, 3]]).unwrap();
    assert!(pid.fixed_points_f1().gens.is_empty());
    // swapping the coordinates fixes exactly the diagonal
    let sw = SigmaModule::from_ints(&ring, &[&[0, 1], &[1, 0]]).unwrap();
    let fp = sw.fixed_points_f1();
    assert_eq!(fp.orders, vec![3]);
    assert_eq!(fp.gens[0][0], fp.gens[0][1]);
}

#[test]
fn fixed_points_over_extension_are_fixed() {
    let ring = RingDesc::standard(2, 2, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let a: Mat = (0..2).map(|_| (0..2).map(|_| ring.random(&mut rng)).collect()).collect();
        let m = SigmaModule::new(ring.clone(), a).unwrap();
        for g in m.fixed_points_f1().gens {
            assert_eq!(m.apply(&g), g);
        }
    }
    // identity over F_4: W_4(F_4)^{F=1} = Z/16
    let id = SigmaModule::from_ints(&ring, &[&[1]]).unwrap();
    assert_eq!(id.fixed_points_f1().orders, vec![4]);
}

#[test]
fn unit_root_part_is_stable_and_invertible() {
    let ring = RingDesc::standard(3, 2, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        // a unit-root block glued to a slope-one block
        let u = ring.random_unit(&mut rng);
        let c = ring.random(&mut rng);
        let d = ring.random(&mut rng).mul_p_pow(1);
        let a = vec![vec![u, c], vec![ring.zero(), d]];
        let m = SigmaModule::new(ring.clone(), a).unwrap();
        let slopes = m.newton_slopes().unwrap();
        let zeros = slopes.iter().filter(|s| **s == r(0, 1)).count();
        let ur = m.unit_root_part().unwrap();
        assert_eq!(ur.basis.len(), zeros);
        assert!(ur.module.matrix[0][0].is_unit());
        let fb = m.apply(&ur.basis[0]);
        let back = crate::linalg::vec_scale(&ur.basis[0], &ur.module.matrix[0][0]);
        assert!(crate::linalg::vec_is_zero(&vec_sub(&fb, &back)));
    }
}

#[test]
fn slopes_invariant_under_change_of_basis() {
    let ring = RingDesc::standard(5, 2, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = SigmaModule::from_ints(&ring, &[&[1, 0, 0], &[0, 0, 5], &[0, 1, 0]]).unwrap();
    let want = base.newton_slopes().unwrap();
    let mut done = 0;
    while done < 10 {
        let p: Mat = (0..3).map(|_| (0..3).map(|_| ring.random(&mut rng)).collect()).collect();
        let Some(pi) = inverse(&p, &ring) else { continue };
        assert_eq!(base.conjugate(&p, &pi).newton_slopes().unwrap(), want);
        done += 1;
    }
}

mod iso {
    use super::*;
    use crate::acris::{DPSeries, PExponent, Profile, RSPair};
    use crate::error::Error;

    fn check(rs: RSPair, b: &[DPSeries]) {
        let a = isocrystal_solve(rs, b).unwrap();
        let res = isocrystal_residual(rs, &a, b).unwrap();
        for x in &res {
            assert!(x.abs_precision() >= (b[0].profile.precision() - rs.s + 1) as i32);
            assert!(x.is_zero(), "residual {x}");
        }
    }

    #[test]
    fn slope_zero_half_exponent() {
        let ring = RingDesc::standard(2, 1, 4).unwrap();
        let pr = Profile::new(ring.clone(), 3, 4).unwrap();
        let b = DPSeries::monomial(&pr, PExponent::new(1, 1, 2), ring.one()).unwrap();
        check(RSPair::new(0, 1).unwrap(), &[b]);
    }

    #[test]
    fn zero_target() {
        let ring = RingDesc::standard(3, 1, 3).unwrap();
        let pr = Profile::new(ring, 2, 3).unwrap();
        let rs = RSPair::new(1, 2).unwrap();
        let a = isocrystal_solve(rs, &[DPSeries::zero(&pr), DPSeries::zero(&pr)]).unwrap();
        assert!(a.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn slope_one_constant_is_refused() {
        let ring = RingDesc::standard(2, 1, 3).unwrap();
        let pr = Profile::new(ring.clone(), 2, 3).unwrap();
        let b = DPSeries::constant(&pr, ring.one());
        let err = isocrystal_solve(RSPair::new(1, 1).unwrap(), &[b]).unwrap_err();
        assert!(matches!(err, Error::ConstantTerm(_)));
    }

    #[test]
    fn random_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for (p, m, r, s) in [(2, 1, 0, 1), (2, 2, 1, 2), (3, 1, 1, 1), (2, 1, 2, 3), (3, 1, 1, 2)] {
            let ring = RingDesc::standard(p, m, 4).unwrap();
            let pr = Profile::new(ring.clone(), 2, 3).unwrap();
            let rs = RSPair::new(r, s).unwrap();
            for _ in 0..10 {
                let b: Vec<DPSeries> = (0..s)
                    .map(|_| {
                        let mut x = DPSeries::random(&pr, 3, 2, &mut rng);
                        if r == s {
                            x.terms.remove(&0);
                        }
                        x
                    })
                    .collect();
                check(rs, &b);
            }
        }
    }

    #[test]
    fn perturbed_solution_has_nonzero_residual() {
        let ring = RingDesc::standard(3, 1, 3).unwrap();
        let pr = Profile::new(ring.clone(), 2, 3).unwrap();
        let rs = RSPair::new(1, 2).unwrap();
        let b = vec![DPSeries::monomial(&pr, PExponent::new(1, 1, 3), ring.one()).unwrap(), DPSeries::zero(&pr)];
        let mut a = isocrystal_solve(rs, &b).unwrap();
        let bump = DPSeries::monomial(&a[1].body.profile, PExponent::new(2, 1, 3), a[1].body.ring().one()).unwrap();
        a[1].body = a[1].body.add(&bump).unwrap();
        let res = isocrystal_residual(rs, &a, &b).unwrap();
        assert!(res.iter().any(|x| !x.is_zero()));
    }
}

mod crystals {
    use super::*;
    use crate::linalg::vec_is_zero;

    #[test]
    fn library_loads_and_round_trips() {
        let lib = library().unwrap();
        assert!(lib.len() >= 10);
        for d in &lib {
            let again = crate::fcrystals::FCrystalDatum::from_json(&d.to_json()).unwrap();
            assert_eq!(again.file, d.file);
        }
    }

    #[test]
    fn broken_datum_is_rejected() {
        let text = library_datum("f1-torsion-p2").unwrap().unwrap().to_json().replace("\"iota\": [\n    [\n      0\n    ]", "\"iota\": [\n    [\n      1\n    ]");
        assert!(crate::fcrystals::FCrystalDatum::from_json(&text).is_err());
    }

    #[test]
    fn predicate_matches_expectations_and_chains() {
        for d in library().unwrap() {
            let rep = smoothness_predicate(&d, 3, d.ring.p() * (d.torsion_exponent() as u64 + 1)).unwrap();
            let chains = d.v_gens.iter().all(|a| (0..=6).all(|n| lifting_chain_exists(&d, a, n).unwrap()));
            let want = d.file.expected.clone().unwrap();
            let got = match rep.verdict {
                Verdict::Smooth => "smooth",
                Verdict::NotSmooth => "not_smooth",
                Verdict::Inconclusive => "inconclusive",
            };
            assert_eq!(got, want, "{}: {}", d.name(), rep.reason);
            assert_eq!(chains, want == "smooth", "{}", d.name());
            if let Some(w) = rep.witness {
                assert!(w.kernel_tors_check(&d), "{}", d.name());
                assert!(!w.is_zero());
            }
        }
    }

    #[test]
    fn chains_satisfy_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = library_datum("chain-extends").unwrap().unwrap();
        let chain = lifting_chain(&d, &d.v_gens[0], 5, &mut rng).unwrap().unwrap();
        assert_eq!(chain[0], d.v_gens[0]);
        for w in chain.windows(2) {
            assert_eq!(d.apply_fp(&w[0]), d.apply_iota(&w[1]));
        }
        let bad = library_datum("chain-breaks-at-three").unwrap().unwrap();
        assert!(lifting_chain_exists(&bad, &bad.v_gens[0], 2).unwrap());
        assert!(!lifting_chain_exists(&bad, &bad.v_gens[0], 3).unwrap());
        assert!(lifting_chain(&bad, &bad.v_gens[0], 3, &mut rng).unwrap().is_none());
        assert!(vec_is_zero(&bad.apply_iota(&bad.v_gens[0])));
    }
}

mod product_model {
    use super::*;
    use crate::acris::{DPSeries, PExponent, Profile};
    use crate::linalg::zero_vec;
    use rand::Rng;

    fn random_elem(d: &crate::fcrystals::FCrystalDatum, pr: &Profile, rng: &mut ChaCha8Rng) -> ProductElem {
        let mut e = ProductElem::zero(pr);
        for _ in 0..4 {
            let key = rng.gen_range(0..=pr.limit());
            let a: Vec<_> = (0..d.dim_n()).map(|_| d.ring.random(rng)).collect();
            e.add_a(d, key, a);
            let kb = rng.gen_range(pr.scale()..=pr.limit());
            let b: Vec<_> = (0..d.dim_h()).map(|_| d.ring.random(rng)).collect();
            e.add_b(d, kb, b).unwrap();
        }
        e
    }

    #[test]
    fn normal_form_is_idempotent_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in ["f1-torsion-p2", "mixed-ordinary-plus-chain", "order-p2-obstructed", "f1-torsion-f4"] {
            let d = library_datum(name).unwrap().unwrap();
            let pr = Profile::new(d.ring.clone(), 2, 6).unwrap();
            for _ in 0..20 {
                let e = random_elem(&d, &pr, &mut rng);
                let nf = e.normal_form(&d).unwrap();
                assert_eq!(nf.normal_form(&d).unwrap(), nf, "{name}");
                assert_eq!(nf.iota_image(&d), e.iota_image(&d), "{name}");
                // moving a V-element or an ι-image between the summands is invisible
                if let Some(v) = d.v_gens.first() {
                    let mut e2 = e.clone();
                    e2.add_a(&d, pr.scale(), v.clone());
                    assert_eq!(e2.normal_form(&d).unwrap(), nf, "{name}");
                }
            }
        }
    }

    #[test]
    fn pure_first_summand_has_no_b_part() {
        let d = library_datum("mixed-ordinary-plus-chain").unwrap().unwrap();
        let pr = Profile::new(d.ring.clone(), 2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = DPSeries::random(&pr, 5, 2, &mut rng);
        let n: Vec<_> = (0..d.dim_n()).map(|_| d.ring.random(&mut rng)).collect();
        let e = ProductElem::i_xc(&d, &n, &s).normal_form(&d).unwrap();
        assert!(e.b.is_empty());
    }

    #[test]
    fn nygaard_image_merges_into_first_summand() {
        let d = library_datum("chain-extends").unwrap().unwrap();
        let pr = Profile::new(d.ring.clone(), 2, 6).unwrap();
        let n = vec![d.ring.zero(), d.ring.one()];
        let h = d.apply_iota(&n);
        let s = DPSeries::monomial(&pr, PExponent::integer(1, 2), d.ring.one()).unwrap();
        let via_cx = ProductElem::i_cx(&d, &h, &s).unwrap().normal_form(&d).unwrap();
        let via_xc = ProductElem::i_xc(&d, &n, &s).normal_form(&d).unwrap();
        assert!(via_cx.b.is_empty());
        assert_eq!(via_cx, via_xc);
    }

    #[test]
    fn witness_has_b_part() {
        let d = library_datum("f1-torsion-p2").unwrap().unwrap();
        let rep = smoothness_predicate(&d, 3, 4).unwrap();
        let w = rep.witness.unwrap().normal_form(&d).unwrap();
        assert!(!w.b.is_empty());
        assert!(w.kernel_tors_check(&d));
    }

    #[test]
    fn frobenius_formulas() {
        let d = library_datum("f1-torsion-p3").unwrap().unwrap();
        let pr = Profile::new(d.ring.clone(), 2, 9).unwrap();
        let one = vec![d.ring.one()];
        let mut e = ProductElem::zero(&pr);
        e.add_a(&d, 1, one.clone());
        e.add_a(&d, 4, one.clone());
        let f = e.apply_fc(&d);
        assert_eq!(f.a.keys().copied().collect::<Vec<_>>(), vec![3, 12]);
        assert!(f.a.values().all(|v| *v == one));
        let mut b = ProductElem::zero(&pr);
        b.add_b(&d, 9, one.clone()).unwrap();
        let fp = b.apply_fp(&d);
        assert_eq!(fp.get(&27), Some(&d.apply_frob(&one)));
        assert_eq!(fp.len(), 1);
    }

    #[test]
    fn kernel_check_examples() {
        let d = library_datum("f1-torsion-p2").unwrap().unwrap();
        let pr = Profile::new(d.ring.clone(), 2, 4).unwrap();
        assert!(ProductElem::zero(&pr).kernel_tors_check(&d));
        let mut e = ProductElem::zero(&pr);
        e.add_a(&d, 2, vec![d.ring.one()]);
        assert!(!e.kernel_tors_check(&d));
        let free = library_datum("ordinary-curve-h1").unwrap().unwrap();
        let pr3 = Profile::new(free.ring.clone(), 2, 4).unwrap();
        let mut t = ProductElem::zero(&pr3);
        t.add_a(&free, 0, zero_vec(&free.ring, 2));
        t.add_b(&free, 9, vec![free.ring.one(), free.ring.zero()]).unwrap();
        assert!(!t.kernel_tors_check(&free));
    }

    #[test]
    fn theta_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for name in ["chain-extends", "order-p2-unobstructed", "mixed-ordinary-plus-chain", "torsion-free-minimal"] {
            let d = library_datum(name).unwrap().unwrap();
            let p = d.ring.p();
            let e = d.torsion_exponent() as u64;
            let pr = Profile::new(d.ring.clone(), 6, 4 * p * (e + 1)).unwrap();
            for _ in 0..10 {
                let m = rng.gen_range(2..5usize);
                let a = d.v_gens[rng.gen_range(0..d.v_gens.len())].clone();
                let chain = lifting_chain(&d, &a, m, &mut rng).unwrap().unwrap();
                // smallest ᾱ = u/p^v with p^{m-2} ᾱ ≥ e
                let v = rng.gen_range(0..3u32);
                let need = (e * p.pow(v)).div_ceil(p.pow(m as u32 - 2)).max(1);
                let alpha = PExponent::new(need + rng.gen_range(0..3), v, p);
                let th = theta_generator(&d, &pr, &chain, &alpha).unwrap();
                assert!(th.kernel_tors_check(&d), "{name}");
                let low = theta_generator(&d, &pr, &chain, &alpha.div_p()).unwrap();
                let lhs = low.apply_fc(&d).normal_form(&d).unwrap();
                let k = alpha.div_p().floor() as u32;
                let rhs = th.scale(&d, &d.ring.p_pow(k.min(d.ring.n))).normal_form(&d).unwrap();
                assert_eq!(lhs, rhs, "{name} m={m} ᾱ={alpha}");
            }
        }
    }
}
