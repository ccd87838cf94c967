use covwit_core::choi::ChoiScale;
use covwit_core::hh::{self, HhCoeffs};
use covwit_core::linalg::{herm_eigvals, is_psd, partial_transpose, psd_threshold};
use covwit_core::quo::{self, QuoCoeffs, QuoType};
use covwit_core::random::{haar_pure_state, haar_unitary, random_matrix, rng, signed_permutation};
use covwit_core::s3::perm_operator;
use covwit_core::twirl::{cond_expect, std_basis, twirl_oo, OOProjections, Symmetry};
use covwit_core::werner3::{self, W3Type};
use covwit_core::{CMat, Dims, Perm3, S3Coeffs, Sign, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn coeff() -> impl Strategy<Value = f64> {
    -2.0f64..2.0
}

fn tuple() -> impl Strategy<Value = [f64; 6]> {
    [coeff(), coeff(), coeff(), coeff(), coeff(), coeff()]
}

fn min_eig(x: &CMat) -> f64 {
    herm_eigvals(x, &tol()).unwrap()[0]
}

fn conj_all(x: &CMat, u: &CMat, k: usize) -> CMat {
    let mut g = u.clone();
    for _ in 1..k {
        g = covwit_core::linalg::kron(&g, u).unwrap();
    }
    &(&g * x) * &g.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cond_expect_is_idempotent(seed in any::<u64>(), d in 2usize..=4, which in 0usize..3) {
        let sym = [Symmetry::Hh, Symmetry::Uuu, Symmetry::Uubaru][which];
        prop_assume!(sym == Symmetry::Hh || d <= 3);
        let basis = std_basis(sym, d).unwrap();
        let n = d.pow(sym.parties());
        let x = random_matrix(&mut rng(seed), n, n);
        let e = cond_expect(&x, &basis).unwrap();
        prop_assert!(cond_expect(&e, &basis).unwrap().max_abs_diff(&e) <= 1e-10);
    }

    #[test]
    fn cond_expect_is_covariant(seed in any::<u64>(), d in 2usize..=3) {
        let mut r = rng(seed);
        let hh_basis = std_basis(Symmetry::Hh, d).unwrap();
        let x = random_matrix(&mut r, d * d, d * d);
        let h = signed_permutation(&mut r, d);
        let lhs = cond_expect(&conj_all(&x, &h, 2), &hh_basis).unwrap();
        prop_assert!(lhs.max_abs_diff(&cond_expect(&x, &hh_basis).unwrap()) <= 1e-9);
        let u = haar_unitary(&mut r, d);
        let y = random_matrix(&mut r, d * d * d, d * d * d);
        let uuu = std_basis(Symmetry::Uuu, d).unwrap();
        let lhs = cond_expect(&conj_all(&y, &u, 3), &uuu).unwrap();
        prop_assert!(lhs.max_abs_diff(&cond_expect(&y, &uuu).unwrap()) <= 1e-9);
        let g = covwit_core::linalg::kron_all(&[&u, &u.conj(), &u]).unwrap();
        let uubaru = std_basis(Symmetry::Uubaru, d).unwrap();
        let lhs = cond_expect(&(&(&g * &y) * &g.adjoint()), &uubaru).unwrap();
        prop_assert!(lhs.max_abs_diff(&cond_expect(&y, &uubaru).unwrap()) <= 1e-9);
    }

    #[test]
    fn oo_twirl_stays_in_span_and_psd(seed in any::<u64>(), d in 2usize..=4) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, d * d, d * d);
        let x = &a.adjoint() * &a;
        let t = twirl_oo(&x, d).unwrap();
        let p = OOProjections::new(d);
        let mut span = CMat::zeros(d * d, d * d);
        for (pi, rank) in p.all().into_iter().zip(p.ranks()) {
            span.add_scaled(pi.hs_inner(&t) / rank as f64, pi);
        }
        prop_assert!(span.max_abs_diff(&t) <= 1e-10);
        prop_assert!(is_psd(&t, &tol()).unwrap().psd);
    }

    #[test]
    fn hh_family_is_fixed_by_cond_expect(d in 2usize..=4, a in coeff(), b in coeff(), c in coeff(), seed in any::<u64>()) {
        let basis = std_basis(Symmetry::Hh, d).unwrap();
        let choi = hh::choi(&HhCoeffs::new(d, a, b, c).unwrap(), ChoiScale::Unnormalized);
        prop_assert!(cond_expect(&choi, &basis).unwrap().max_abs_diff(&choi) <= 1e-10);
        let mut perturbed = choi.clone();
        perturbed.add_scaled(covwit_core::linalg::re(0.1), &random_matrix(&mut rng(seed), d * d, d * d));
        prop_assert!(cond_expect(&perturbed, &basis).unwrap().max_abs_diff(&perturbed) > 1e-6);
    }

    #[test]
    fn hh_positive_maps_pass_sampling(d in 3usize..=5, p in [0.0f64..1.5, -0.5f64..1.0, -0.5f64..1.0], seed in any::<u64>()) {
        let c = HhCoeffs::from_point(d, p).unwrap();
        prop_assume!(hh::positivity_check(&c).unwrap().holds());
        let psi = hh::build_psi(&c);
        let mut r = rng(seed);
        let mut vectors: Vec<_> = (1..=6).map(|t| hh::counterexample_vector(t, d).unwrap()).collect();
        vectors.extend((0..200).map(|_| haar_pure_state(&mut r, d)));
        for v in vectors {
            prop_assert!(min_eig(&psi.apply(&CMat::projector(&v)).unwrap()) >= -tol().psd_tol);
        }
    }

    #[test]
    fn hh_cptp_matches_choi_spectrum(d in 3usize..=5, p in [-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0]) {
        let c = HhCoeffs::from_point(d, p).unwrap();
        let region = hh::cptp_check(&c);
        let e = min_eig(&hh::choi(&c, ChoiScale::Normalized));
        prop_assume!(region.min_slack().abs() > 1e-9 && e.abs() > 1e-9);
        prop_assert_eq!(region.holds(), e > 0.0);
    }

    #[test]
    fn werner3_positivity_matches_orbit(d in 3usize..=5, t in tuple()) {
        let c = S3Coeffs::new(d, t).unwrap();
        let region = werner3::positivity_check_w3(&c).unwrap();
        let e = min_eig(&werner3::map_of(&c).apply(&CMat::unit(d, 0, 0)).unwrap());
        prop_assume!(region.min_slack().abs() > 1e-9 && e.abs() > 1e-9);
        prop_assert_eq!(region.holds(), e > 0.0);
    }

    #[test]
    fn werner3_blocks_match_spectra(d in 3usize..=4, t in tuple()) {
        let c = S3Coeffs::new(d, t).unwrap();
        let x = c.perm_combination();
        let f = werner3::cp_check_w3(&c).unwrap();
        let ex = min_eig(&x);
        if f.min_slack().abs() > 1e-9 && ex.abs() > 1e-9 {
            prop_assert_eq!(f.holds(), ex > 0.0);
        }
        let g = werner3::ccp_check_w3(&c).unwrap();
        let eg = min_eig(&partial_transpose(&x, &Dims::uniform(d, 3).unwrap(), 0).unwrap());
        if g.min_slack().abs() > 1e-9 && eg.abs() > 1e-9 {
            prop_assert_eq!(g.holds(), eg > 0.0);
        }
    }

    #[test]
    fn rho_t_is_c_ab_symmetric(t in 0.01f64..10.0, d in 3usize..=4) {
        let (_, rho) = werner3::rho_t(d, t).unwrap();
        let v = perm_operator(Perm3::from_images([2, 1, 0]), d);
        prop_assert!((&(&v * &rho) * &v).max_abs_diff(&rho) <= 1e-12);
    }

    #[test]
    fn quo_positivity_matches_orbit(d in 2usize..=5, t in tuple()) {
        let q = QuoCoeffs::from_tuple(d, t).unwrap();
        let region = quo::positivity_check_quo(&q);
        let e = min_eig(&q.map().apply(&CMat::unit(d, 0, 0)).unwrap());
        prop_assume!(region.min_slack().abs() > 1e-9 && e.abs() > 1e-9);
        prop_assert_eq!(region.holds(), e > 0.0);
    }

    #[test]
    fn quo_extremals_are_decomposable(d in 2usize..=4, u in -1.0f64..1.0, v in -1.0f64..1.0, plus in any::<bool>(), k in 0usize..4) {
        let kinds = QuoType::for_dim(d);
        let kind = kinds[k % kinds.len()];
        let (a, b) = ((1.0 + u) / 2.0, (1.0 - u) / 2.0);
        let c = v * (a * b).sqrt();
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let e = quo::extremal_quo(kind, a, b, c, sign, d).unwrap();
        let x = e.coeffs.operator();
        let pt = partial_transpose(&x, &Dims::uniform(d, 3).unwrap(), 0).unwrap();
        let t = tol();
        prop_assert!(is_psd(&x, &t).unwrap().psd || is_psd(&pt, &t).unwrap().psd);
    }
}

#[test]
fn type_three_unit_extremal_is_not_decomposable() {
    for d in 3..=5 {
        let e = werner3::extremal_w3(W3Type::III, 1.0, 0.0, 0.0, Sign::Plus, d).unwrap();
        assert!(werner3::is_positive_w3(&e.coeffs).unwrap());
        let t = tol();
        let x = e.coeffs.perm_combination();
        let pt = partial_transpose(&x, &Dims::uniform(d, 3).unwrap(), 0).unwrap();
        let cp = is_psd(&x, &t).unwrap();
        let ccp = is_psd(&pt, &t).unwrap();
        assert!(cp.min_eig < psd_threshold(x.frobenius_norm(), &t), "d={d}");
        assert!(ccp.min_eig < psd_threshold(pt.frobenius_norm(), &t), "d={d}");
        assert!(!e.cp && !e.ccp);
    }
}

#[test]
fn t_basis_is_partial_transpose_of_permutations() {
    for d in 2..=4 {
        let dims = Dims::uniform(d, 3).unwrap();
        for s in Perm3::ALL {
            let expected = partial_transpose(&perm_operator(s, d), &dims, 1).unwrap();
            assert_eq!(quo::build_t(s, d), expected);
        }
    }
}
