use super::*;
use crate::testutil::Lcg;

const TOL12: f64 = 1e-12;

#[test]
fn char_fn_basics() {
    // lambda = 0 is never a root
    let h0 = char_fn(Complex64::new(0.0, 0.0), 3.0, 0.5, 1.0);
    assert_eq!(h0, Complex64::new(1.0, 0.0));
    // alpha2 = alpha3, tau = 0, lambda = i is a root
    let hi = char_fn(Complex64::i(), 0.0, 0.7, 0.7);
    assert!(hi.norm() < 1e-15);
}

#[test]
fn omega_pm_matches_quartic_bisection() {
    // independent oracle: bisection on w^4 + (a2^2 - a3^2 - 2) w^2 + 1 = 0
    let (alpha2, alpha3) = (0.5, 1.0);
    let p = |w: f64| w.powi(4) + (alpha2 * alpha2 - alpha3 * alpha3 - 2.0) * w * w + 1.0;
    let bisect = |mut lo: f64, mut hi: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p(lo) * p(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let w_minus = bisect(1e-6, 1.0);
    let w_plus = bisect(1.0, 10.0);
    let (wp, wm) = omega_pm(alpha2, alpha3).unwrap().unwrap();
    assert!((wp - w_plus).abs() < 1e-10, "omega_plus {wp} vs bisection {w_plus}");
    assert!((wm - w_minus).abs() < 1e-10);
    assert!((wp - 1.522737).abs() < 1e-6);
    assert!((wm - 0.656712).abs() < 1e-6);

    assert_eq!(omega_pm(0.7, 0.7).unwrap(), Some((1.0, 1.0)));
    assert_eq!(omega_pm(1.0, 0.5).unwrap(), None);
    assert!(omega_pm(-1.0, 0.5).is_err());
}

#[test]
fn critical_delays_solve_the_crossing_system() {
    let set = critical_delays(0.5, 1.0, 5).unwrap();
    let wp = set.omega_plus.unwrap();
    let wm = set.omega_minus.unwrap();
    assert!((set.branch_minus[0] - 1.594607).abs() < 1e-5);
    assert!((set.branch_plus[0] - 3.438536).abs() < 1e-5);
    // every stored delay satisfies both equations of the crossing system
    for (&t, w) in set
        .branch_plus
        .iter()
        .map(|t| (t, wp))
        .chain(set.branch_minus.iter().map(|t| (t, wm)))
    {
        assert!((1.0 - w * w - 1.0 * w * (w * t).sin()).abs() < 1e-10);
        assert!((0.5 - 1.0 * (w * t).cos()).abs() < 1e-10);
        assert!(char_fn(Complex64::new(0.0, w), t, 0.5, 1.0).norm() < RESIDUAL_TOL);
    }
    // arithmetic progression gaps
    for w in set.branch_plus.windows(2) {
        assert!((w[1] - w[0] - 2.0 * PI / wp).abs() < TOL12);
    }
    for w in set.branch_minus.windows(2) {
        assert!((w[1] - w[0] - 2.0 * PI / wm).abs() < TOL12);
    }
}

#[test]
fn resonant_branch_is_2pi_j() {
    let set = critical_delays(0.7, 0.7, 4).unwrap();
    assert_eq!(set.ordering, OrderingCase::Resonant);
    let taus = set.resonant_branch.as_ref().unwrap();
    for (j, &t) in taus.iter().enumerate() {
        assert!((t - 2.0 * PI * j as f64).abs() < TOL12);
        assert!(char_fn(Complex64::i(), t, 0.7, 0.7).norm() < 1e-12);
    }
    assert!(set.branch_plus.is_empty() && set.branch_minus.is_empty());
}

#[test]
fn subcritical_has_no_crossings() {
    let set = critical_delays(1.0, 0.5, 3).unwrap();
    assert_eq!(set.ordering, OrderingCase::SubcriticalNone);
    assert!(set.branch_plus.is_empty());
    assert!(set.omega_plus.is_none());
}

#[test]
fn crossing_derivatives_match_tracked_roots() {
    // central finite differences of the Newton-continued root, step 1e-4,
    // relative agreement 1e-4, branches plus/minus, j <= 3
    for (alpha2, alpha3) in [(0.5, 1.0), (0.3, 0.9), (0.8, 1.7)] {
        let set = critical_delays(alpha2, alpha3, 3).unwrap();
        for (branch, taus, w) in [
            (Branch::Plus, &set.branch_plus, set.omega_plus.unwrap()),
            (Branch::Minus, &set.branch_minus, set.omega_minus.unwrap()),
        ] {
            for (j, &tau_c) in taus.iter().enumerate() {
                let d = crossing_derivatives(alpha2, alpha3, branch, j).unwrap();
                let step = 1e-4;
                let seed = Complex64::new(0.0, w);
                let hi = newton_polish(seed, tau_c + step, alpha2, alpha3).unwrap();
                let lo = newton_polish(seed, tau_c - step, alpha2, alpha3).unwrap();
                let fd_sigma = (hi.re - lo.re) / (2.0 * step);
                let fd_omega = (hi.im - lo.im) / (2.0 * step);
                assert!(
                    (fd_sigma - d.sigma_prime).abs() <= 1e-4 * d.sigma_prime.abs().max(1e-3),
                    "sigma' mismatch at ({alpha2},{alpha3}) {branch:?} j={j}: fd {fd_sigma} vs {}",
                    d.sigma_prime
                );
                assert!(
                    (fd_omega - d.omega_prime).abs() <= 1e-4 * d.omega_prime.abs().max(1e-3),
                    "omega' mismatch: fd {fd_omega} vs {}",
                    d.omega_prime
                );
                // sign contract
                match branch {
                    Branch::Plus => assert!(d.sigma_prime > 0.0),
                    Branch::Minus => assert!(d.sigma_prime < 0.0),
                    Branch::Resonant => unreachable!(),
                }
                assert!(d.omega_prime < 0.0);
            }
        }
    }
}

#[test]
fn resonant_derivatives() {
    // at tau_0 = 0: sigma''(0) = -4 a2 / (1 * 4) = -a2
    let d = crossing_derivatives(0.7, 0.7, Branch::Resonant, 0).unwrap();
    assert_eq!(d.sigma_prime, 0.0);
    assert!((d.sigma_double_prime.unwrap() + 0.7).abs() < TOL12);
    assert!(d.omega_prime < 0.0);
    let d1 = crossing_derivatives(0.7, 0.7, Branch::Resonant, 1).unwrap();
    assert!(d1.sigma_double_prime.unwrap() < 0.0);
    // branch inconsistent with the alpha relation is rejected
    assert!(crossing_derivatives(0.5, 1.0, Branch::Resonant, 0).is_err());
    assert!(crossing_derivatives(0.7, 0.7, Branch::Plus, 0).is_err());
}

#[test]
fn ordering_cases() {
    // (27): interleaved at (0.5, 1): the cosine term evaluates to -0.31689
    let g = tangency_discriminant(0.5, 1.0);
    assert!((g - (0.5 + 0.31689)).abs() < 1e-4);
    match ordering(0.5, 1.0).unwrap() {
        OrderingCase::Interleaved { m } => assert_eq!(m, 0),
        other => panic!("expected interleaved, got {other:?}"),
    }
    // tangency instance located by bisection on the discriminant in alpha3
    let alpha2 = 0.5;
    let (mut lo, mut hi) = (1.0, 3.0);
    assert!(tangency_discriminant(alpha2, lo) > 0.0 && tangency_discriminant(alpha2, hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tangency_discriminant(alpha2, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a3_c2 = 0.5 * (lo + hi);
    assert_eq!(ordering(alpha2, a3_c2).unwrap(), OrderingCase::Tangent);
    // at tangency, tau_0^+ = tau_0^-
    let set = critical_delays(alpha2, a3_c2, 0).unwrap();
    assert!((set.branch_plus[0] - set.branch_minus[0]).abs() < 1e-7);
    // swapped for alpha3 >> alpha2
    assert_eq!(ordering(0.5, 3.0).unwrap(), OrderingCase::Swapped);
    let set = critical_delays(0.5, 3.0, 4).unwrap();
    for j in 0..=4 {
        assert!(set.branch_plus[j] < set.branch_minus[j]);
    }
}

#[test]
fn interleaved_chain_holds_up_to_m() {
    // Lemma-3 pattern: tau_0^- < tau_0^+ < tau_1^- < ... < tau_m^- < tau_m^+ < tau_{m+1}^+ <= tau_{m+1}^-
    for (alpha2, alpha3) in [(0.5, 1.0), (0.5, 0.52), (1.0, 1.3), (0.2, 0.6)] {
        let m = match ordering(alpha2, alpha3).unwrap() {
            OrderingCase::Interleaved { m } => m,
            other => panic!("expected interleaved at ({alpha2},{alpha3}), got {other:?}"),
        };
        let set = critical_delays(alpha2, alpha3, m + 2).unwrap();
        for j in 0..=m {
            assert!(set.branch_minus[j] < set.branch_plus[j]);
            if j > 0 {
                assert!(set.branch_plus[j - 1] < set.branch_minus[j]);
            }
        }
        assert!(set.branch_plus[m + 1] <= set.branch_minus[m + 1]);
    }
}

#[test]
fn classify_region_examples() {
    assert_eq!(classify_region(1.0, 0.5).unwrap(), Region::D1);
    assert_eq!(classify_region(0.5, 1.0).unwrap(), Region::D2);
    assert_eq!(classify_region(0.5, 3.0).unwrap(), Region::D3);
    assert_eq!(classify_region(0.7, 0.7).unwrap(), Region::C1);
}

#[test]
fn stability_examples() {
    for tau in [0.0, 1.0, 5.0, 40.0] {
        let v = stability(1.0, 0.5, tau).unwrap();
        assert!(v.stable && v.unstable_root_pairs == 0 && v.region == Region::D1);
    }
    let v = stability(0.5, 1.0, 2.0).unwrap();
    assert!(v.stable, "2.0 lies in the window (1.5946, 3.4385)");
    assert_eq!(v.stability_windows.len(), 1);
    let (lo, hi) = v.stability_windows[0];
    assert!((lo - 1.5946069).abs() < 1e-6 && (hi - 3.4385362).abs() < 1e-6);
    let v = stability(0.5, 1.0, 1.0).unwrap();
    assert!(!v.stable);
    assert_eq!(v.unstable_root_pairs, 1);
    // past the last window the count keeps growing
    let v = stability(0.5, 1.0, 20.0).unwrap();
    assert!(!v.stable && v.unstable_root_pairs >= 2);
    // marginal refusal at a critical delay
    let set = critical_delays(0.5, 1.0, 0).unwrap();
    assert!(matches!(
        stability(0.5, 1.0, set.branch_plus[0]),
        Err(Error::Marginal { .. })
    ));
}

#[test]
fn count_unstable_roots_examples() {
    assert_eq!(count_unstable_roots(1.0, 0.5, 5.0).unwrap(), 0);
    assert_eq!(count_unstable_roots(0.5, 1.0, 0.0).unwrap(), 2);
    let set = critical_delays(0.5, 1.0, 0).unwrap();
    assert_eq!(count_unstable_roots(0.5, 1.0, set.branch_plus[0] + 0.05).unwrap(), 2);
    assert_eq!(count_unstable_roots(0.5, 1.0, 2.0).unwrap(), 0);
    // C1: grazing roots never cross
    assert_eq!(count_unstable_roots(0.7, 0.7, 3.0).unwrap(), 0);
    // refusal at criticality
    assert!(count_unstable_roots(0.5, 1.0, set.branch_minus[0]).is_err());
}

#[test]
fn stability_agrees_with_root_count_on_a_small_grid() {
    let mut rng = Lcg::new(0x5eed_cafe);
    for _ in 0..4 {
        let alpha2 = 0.2 + 1.3 * rng.uniform();
        let alpha3 = 0.2 + 2.0 * rng.uniform();
        if alpha3 == alpha2 {
            continue;
        }
        for i in 0..8 {
            let tau = 0.3 + 1.1 * i as f64;
            match (stability(alpha2, alpha3, tau), count_unstable_roots(alpha2, alpha3, tau)) {
                (Ok(v), Ok(n)) => assert_eq!(
                    v.unstable_root_pairs * 2,
                    n,
                    "mismatch at ({alpha2}, {alpha3}, {tau})"
                ),
                _ => {} // marginal points skipped
            }
        }
    }
}

#[test]
fn track_root_sign_changes_at_crossings() {
    let set = critical_delays(0.5, 1.0, 0).unwrap();
    let wp = set.omega_plus.unwrap();
    let wm = set.omega_minus.unwrap();
    let tp = set.branch_plus[0];
    let tm = set.branch_minus[0];

    // seed at the crossing itself, then track outward in both directions
    let up = track_root(0.5, 1.0, tp, tp + 0.1, Complex64::new(0.0, wp)).unwrap();
    let down = track_root(0.5, 1.0, tp, tp - 0.1, Complex64::new(0.0, wp)).unwrap();
    assert!(up.max_residual() < RESIDUAL_TOL);
    assert!(down.max_residual() < RESIDUAL_TOL);
    assert!(up.last().1.re > 0.0 && down.last().1.re < 0.0, "Re changes sign at tau_0^+");
    // definitive: polish directly on both sides
    let left = newton_polish(Complex64::new(0.0, wp), tp - 0.05, 0.5, 1.0).unwrap();
    let right = newton_polish(Complex64::new(0.0, wp), tp + 0.05, 0.5, 1.0).unwrap();
    assert!(left.re < 0.0 && right.re > 0.0, "sigma'(tau_0^+) > 0");

    let left = newton_polish(Complex64::new(0.0, wm), tm - 0.05, 0.5, 1.0).unwrap();
    let right = newton_polish(Complex64::new(0.0, wm), tm + 0.05, 0.5, 1.0).unwrap();
    assert!(left.re > 0.0 && right.re < 0.0, "sigma'(tau_0^-) < 0");

    // resonant case: Re lambda <= 0 on both sides of tau_1 = 2 pi
    let tau1 = 2.0 * PI;
    let left = newton_polish(Complex64::i(), tau1 - 0.05, 0.7, 0.7).unwrap();
    let right = newton_polish(Complex64::i(), tau1 + 0.05, 0.7, 0.7).unwrap();
    assert!(left.re <= 1e-12 && right.re <= 1e-12);

    // frequency drifts down along the locus near the crossing
    let locus = track_root(0.5, 1.0, tp, tp + 0.2, Complex64::new(0.0, wp)).unwrap();
    let im_first = locus.roots.first().unwrap().im;
    let im_last = locus.roots.last().unwrap().im;
    assert!(im_last < im_first, "omega'(tau_j^+) < 0");
}

#[test]
fn track_root_rejects_bad_seed() {
    assert!(matches!(
        track_root(0.5, 1.0, 1.0, 2.0, Complex64::new(1.0, 1.0)),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn rightmost_root_finds_dominant_mode() {
    // stable D1 point: dominant root must match the tracked value and be stable
    let roots = rightmost_roots(1.0, 0.5, 5.0, 3).unwrap();
    assert!(roots[0].re < 0.0);
    for r in &roots {
        assert!(char_fn(*r, 5.0, 1.0, 0.5).norm() < 1e-10);
    }
    // unstable point: the known crossing pair dominates
    let set = critical_delays(0.5, 1.0, 0).unwrap();
    let tau = set.branch_plus[0] + 0.05;
    let roots = rightmost_roots(0.5, 1.0, tau, 2).unwrap();
    assert!(roots[0].re > 0.0);
    let expect = newton_polish(Complex64::new(0.0, set.omega_plus.unwrap()), tau, 0.5, 1.0).unwrap();
    assert!((roots[0] - expect).norm() < 1e-8);
}

#[test]
fn bilinear_normalization_of_the_hopf_basis() {
    let set = critical_delays(0.5, 1.0, 0).unwrap();
    let w0 = set.omega_plus.unwrap();
    let tau0 = set.branch_plus[0];
    let alpha3 = 1.0;
    let d0 = normalization_d(w0, tau0, alpha3);
    let q = mode_eigenfunction(w0, tau0);
    let qs = adjoint_eigenfunction(w0, tau0, d0);
    let one = bilinear_form(&qs, &q, alpha3, tau0).unwrap();
    assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-12, "<q*, q> = 1, got {one}");
    // <q*, conj(q)> = 0
    let qbar = move |theta: f64| {
        let v = q(theta);
        [v[0].conj(), v[1].conj()]
    };
    let zero = bilinear_form(&qs, &qbar, alpha3, tau0).unwrap();
    assert!(zero.norm() < 1e-12, "<q*, qbar> = 0, got {zero}");
}

#[test]
fn spectral_identities_random_sweep() {
    let mut rng = Lcg::new(0xabad_1dea);
    for _ in 0..60 {
        let alpha2 = 0.05 + 2.0 * rng.uniform();
        let alpha3 = alpha2 + 0.02 + 2.5 * rng.uniform();
        let (wp, wm) = omega_pm(alpha2, alpha3).unwrap().unwrap();
        assert!((wp * wm - 1.0).abs() < TOL12, "omega+ omega- = 1");
        let a = 4.0 + alpha3 * alpha3 - alpha2 * alpha2;
        assert!(((wp + wm) - a.sqrt()).abs() < 1e-11);
        for w in [wp, wm] {
            let lhs = (w * w - 1.0).powi(2);
            let rhs = (alpha3 * alpha3 - alpha2 * alpha2) * w * w;
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }
}

mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn omega_product_is_one(a2 in 0.05f64..2.0, gap in 0.01f64..2.5) {
            let a3 = a2 + gap;
            let (wp, wm) = omega_pm(a2, a3).unwrap().unwrap();
            prop_assert!((wp * wm - 1.0).abs() < 1e-12);
            prop_assert!(wp > 1.0 && wm < 1.0);
        }

        #[test]
        fn stored_delays_are_roots(a2 in 0.1f64..1.5, gap in 0.05f64..1.5, j in 0usize..5) {
            let a3 = a2 + gap;
            let set = critical_delays(a2, a3, j).unwrap();
            let wp = set.omega_plus.unwrap();
            let wm = set.omega_minus.unwrap();
            for &t in &set.branch_plus {
                prop_assert!(char_fn(Complex64::new(0.0, wp), t, a2, a3).norm() < 1e-10);
            }
            for &t in &set.branch_minus {
                prop_assert!(char_fn(Complex64::new(0.0, wm), t, a2, a3).norm() < 1e-10);
            }
        }
    }
}
